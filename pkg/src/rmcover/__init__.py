"""Generalized covering radii of Reed-Muller codes: exact oracles, bounds, and a covering algorithm."""

__version__ = "0.1.0"
