"""Exact wall-crossing numerology for moduli of rank-2 sheaves on surfaces."""

__version__ = "0.1.0"
