"""Subfield subcodes of Hermitian codes: exact dimensions, rate moments,
distribution fits and McEliece key-size profiles."""

__version__ = "0.1.0"
