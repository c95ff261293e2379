# Equilibrium module initialization
