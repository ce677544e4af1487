"""Operator calculus and nonabelian Dold-Kan decompositions for (symmetric-)simplicial groups."""

__version__ = "0.1.0"
