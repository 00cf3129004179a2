"""Stopping redundancy toolkit for binary linear codes on the erasure channel."""

__version__ = "0.1.0"
