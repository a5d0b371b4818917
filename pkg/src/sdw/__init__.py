"""Workbench for finite algebras, subdirect products and higher commutators."""

__version__ = "0.1.0"
