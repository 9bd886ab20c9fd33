"""Exact computations for the Virasoro algebra at central charge 25 and its companions."""

__version__ = "0.1.0"
