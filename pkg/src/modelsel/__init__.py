# Iteration selection
