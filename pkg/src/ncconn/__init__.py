"""Exact Levi-Civita connections on the quantum torus."""
__version__ = "0.1.0"
