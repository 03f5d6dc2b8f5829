"""Extremal inverse-norm lower bounds for matrices with entries in [0, 1]."""

__version__ = "0.1.0"
