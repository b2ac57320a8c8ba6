# First-order Haar chaoses and the commutant operators
