"""Exceptional rational functions over finite fields: construction and verification."""

__version__ = "0.1.0"
