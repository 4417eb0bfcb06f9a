"""Exact verification of q-supercongruences and their p-adic shadows."""

__version__ = "0.1.0"
