"""Exact homological invariants over finite-dimensional commutative local algebras."""

__version__ = "0.1.0"
