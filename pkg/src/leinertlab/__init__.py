"""Numerical toolkit for Leinert sets, multiplier bounds and Fourier-algebra projections on free groups."""

__version__ = "0.1.0"
