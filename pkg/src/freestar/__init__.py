"""Rewriting, growth and integral homology of free regular star-monoids."""

__version__ = "0.1.0"
