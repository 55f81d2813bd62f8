"""Exact Kazhdan-Lusztig cells, type B asymptotic rings and checks."""

__version__ = "0.1.0"
