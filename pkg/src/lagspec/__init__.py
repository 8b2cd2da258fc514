"""Lagrangian planes, the Duistermaat index and Maslov-index spectral counting."""
__version__ = "0.1.0"
