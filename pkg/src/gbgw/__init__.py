"""Exact computations for the generalized BGW tau-function, its free energies and correlators."""

__version__ = "0.1.0"
