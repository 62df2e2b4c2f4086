"""Exact verification of Poisson-Nijenhuis structures on charts, Lie algebras,
polynomial Lie groups and trivial Lie groupoids."""

__version__ = "0.1.0"
