# Common module initialization
