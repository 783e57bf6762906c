"""Weyl-group majorization and the spherical / hypergeometric functions that characterize it."""

__version__ = "0.1.0"
