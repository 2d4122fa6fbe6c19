"""Toroidal special divisors and Borcherds products for even lattices."""

__version__ = "0.1.0"
