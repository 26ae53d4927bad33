"""Dessins d'enfants, Pauli contextuality, and their shared finite geometries."""

__version__ = "0.1.0"
