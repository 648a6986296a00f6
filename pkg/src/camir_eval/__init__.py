"""Parsing, validation and evaluation toolkit for the CAMIR radiology event schema."""

__version__ = "0.1.0"
