# Entrada/salida: lector y escritor MSH 2.2, tablas CSV/JSON
