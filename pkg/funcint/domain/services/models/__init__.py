# Modelos físicos: cuerda, viga, membrana 2-D y adhesión
