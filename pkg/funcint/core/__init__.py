# Core Layer - configuración y logging
