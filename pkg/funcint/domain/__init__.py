# ================================================================================================
# 🏗️ DOMAIN LAYER - funcint (CLEAN ARCHITECTURE)
# ================================================================================================
# Núcleo del sistema: mallas, elementos, ensambles y estadística, sin I/O
