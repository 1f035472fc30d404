"""Symbolic curvature engine and soliton verifier for three-dimensional Walker manifolds."""

__version__ = "0.1.0"
