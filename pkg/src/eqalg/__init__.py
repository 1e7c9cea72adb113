"""Exact computational models for rational equivariant algebra."""

__version__ = "0.1.0"
