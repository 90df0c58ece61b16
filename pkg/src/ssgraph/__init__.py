"""Supersingular isogeny graphs by model walking, modular-curve scans and trace bookkeeping."""

__version__ = "0.1.0"
