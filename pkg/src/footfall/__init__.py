"""Cyber-physical visitor analytics for indoor Wi-Fi spaces."""

__version__ = "0.1.0"
