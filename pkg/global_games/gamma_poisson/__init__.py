# Gamma-Poisson model module initialization
