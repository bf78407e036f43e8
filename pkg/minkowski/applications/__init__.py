# Geometry layer of the minkowski app
