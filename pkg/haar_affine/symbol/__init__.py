# Symbol calculus
