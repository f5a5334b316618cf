"""Exact construction, verification and classification of Carnot algebras of width 3/2."""

__version__ = "0.1.0"
