"""
Domain models: receiver-set lattice, messages, linear forms and the combination network.
"""
