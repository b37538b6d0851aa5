# Bases, quadrature and curve smoothing
