"""Exact construction and verification of band-limited orthonormal wavelets on the sets S_n."""

__version__ = "0.1.0"
