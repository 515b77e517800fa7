"""Isochronous centres of scalar oscillators ``x'' + g(x) = 0``."""

__version__ = "0.1.0"
