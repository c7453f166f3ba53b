"""Exact computations with generalized Nakajima categories of Dynkin quivers."""

__version__ = "0.1.0"
