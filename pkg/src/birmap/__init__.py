"""Exact degree growth and invariant fibrations for a family of planar birational maps."""

__version__ = "0.1.0"
