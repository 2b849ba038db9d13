"""Volatility-targeted two-asset index construction and evaluation."""

__version__ = "1.0.0"
