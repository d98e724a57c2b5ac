"""Numerical quantum harmonic analysis on discretized phase space."""

__version__ = "0.1.0"
