"""Graded polynomial identities of the 3x3 upper-triangular Lie algebra."""

__version__ = "0.1.0"
