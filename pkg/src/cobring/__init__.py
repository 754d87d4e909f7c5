"""Exact computations with the ring R of Z/2-equivariant complex cobordism."""

__version__ = "0.1.0"
