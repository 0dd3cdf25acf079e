"""Desk-scale experiments on list decoding of Reed-Solomon and concatenated
codes under random errors and erasures."""

__version__ = "0.1.0"
