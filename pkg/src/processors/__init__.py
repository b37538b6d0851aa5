# Curve tables, model files and the command pipeline
