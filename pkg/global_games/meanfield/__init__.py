# Mean-field module initialization
