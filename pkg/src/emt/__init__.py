"""Workbench for effective model theory over coded structures."""

__version__ = "0.1.0"
