"""Numba/numpy kernel implementations behind the public linear-algebra API."""
