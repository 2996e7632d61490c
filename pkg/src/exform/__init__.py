"""Workbench for stochastic decision forests, extensive forms, and timing games."""

__version__ = "0.1.0"
