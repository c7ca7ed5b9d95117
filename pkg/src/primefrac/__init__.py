"""Approximating rationals by sums of fractions with prime denominators."""

__version__ = "0.1.0"
