# Dyadic tree, scalars and step functions
