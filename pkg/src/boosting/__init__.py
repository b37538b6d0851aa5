# Boosting engines
