# Servicios del dominio: elementos, ensamblaje, estadística gaussiana, MCMC
