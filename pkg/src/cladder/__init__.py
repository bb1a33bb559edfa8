"""Interval approximations, connected persistence diagrams and finite-type
decompositions for persistence modules on commutative ladders."""

__version__ = "0.1.0"
