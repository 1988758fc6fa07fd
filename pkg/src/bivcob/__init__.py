"""Bivariant cobordism calculus: formal group laws, Chern classes, finite-site bivariant theories."""
__version__ = "0.1.0"
