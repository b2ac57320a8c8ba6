# Input and output services
