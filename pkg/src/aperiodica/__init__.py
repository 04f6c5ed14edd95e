"""Numerical classification of generalized c-almost periodic functions."""

__version__ = "0.1.0"
