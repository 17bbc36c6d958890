"""Exact-arithmetic twisted de Rham and Cech-de Rham cohomology on finite models."""

__version__ = "0.1.0"
