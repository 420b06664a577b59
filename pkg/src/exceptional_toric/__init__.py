"""Exact numerics for exceptional sequences on rational surfaces and their toric fans."""

__version__ = "0.1.0"
