"""Evolving evaluation functions for a deterministic collectible card game."""

__version__ = "0.1.0"
