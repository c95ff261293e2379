# Command-line module initialization
