"""Hecke algebras, Kazhdan-Lusztig cells, asymptotic rings and Hecke endomorphism algebras."""

__version__ = "0.1.0"
