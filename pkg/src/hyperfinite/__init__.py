"""Finite matrix-unit models of the hyperfinite II_1 factor, checked exactly."""

__version__ = "0.1.0"
