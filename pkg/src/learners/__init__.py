# Weak learners
