# Entidades del dominio: mallas, mapas de DOFs y formas cuadráticas
