"""Deterministic machinery for synthetic-speech detection experiments."""

__version__ = "0.1.0"
