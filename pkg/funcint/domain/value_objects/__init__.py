# Value objects del dominio (inmutables)
