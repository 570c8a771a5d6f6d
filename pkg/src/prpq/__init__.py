"""Parametric regular path queries over property graphs."""

__version__ = "0.1.0"
