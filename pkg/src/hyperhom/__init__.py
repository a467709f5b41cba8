"""Exact homological algebra over graded hypersurface rings."""

__version__ = "1.0.0"
