"""Enumeration and filtering of triple point connection schemes for surface-knot diagrams."""

__version__ = "0.1.0"
