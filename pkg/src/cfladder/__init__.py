"""Continued-fraction ladders of (cbrt(m), cbrt(m^2)) in exact arithmetic."""

__version__ = "0.1.0"
