# Functional linear models
