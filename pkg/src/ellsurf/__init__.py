"""Elliptic surfaces parametrising pairs of N-congruent elliptic curves."""

__version__ = "0.1.0"
