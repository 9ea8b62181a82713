"""Eigenvalue distribution of random homogeneous polynomial systems."""

__version__ = "0.1.0"
