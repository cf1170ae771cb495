"""Desingularized boundary element solver for the 3D Helmholtz equation."""
__version__ = "0.1.0"
