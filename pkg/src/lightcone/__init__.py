"""Möbius geometry of surfaces in S^n in the light-cone model, with jets."""

__version__ = "0.1.0"
