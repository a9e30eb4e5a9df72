# Dual complexes of simple normal crossing configurations
__version__ = "0.1.0"
