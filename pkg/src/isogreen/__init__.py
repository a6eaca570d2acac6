"""Exact counting of points of additive character varieties and of
multiplicities of generic isotypic components, with finite-field oracles."""

__version__ = "0.1.0"
