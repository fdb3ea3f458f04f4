"""Voronoi choice games: utilities, equilibria, expected utilities and checks."""

__version__ = "0.1.0"
