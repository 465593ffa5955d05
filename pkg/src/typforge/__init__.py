"""Type monoids of separated graphs and self-similar actions."""

__version__ = "0.1.0"
