"""Exact Gaussian evolution for the bilinear damped-oscillator master equation."""

__version__ = "0.1.0"
