"""Exact higher extensions in finite extriangulated categories."""

__version__ = "0.1.0"
