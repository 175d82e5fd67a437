# Interfaz de línea de comandos (funcint run | mesh-info | schema)
