"""Exact causal-region geometry, colored operads over regions, their localization and operad algebras."""

__version__ = "0.1.0"
