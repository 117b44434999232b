"""Exact Bruck–Bose geometry of PG(2,q^3) in PG(6,q) with a verification CLI."""

__version__ = "0.1.0"
