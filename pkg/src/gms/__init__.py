"""Exact computation with graphical matrix spaces."""

__version__ = "0.1.0"
