# Estimators module initialization
