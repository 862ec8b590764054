"""Involutions of the second kind on incidence algebras of finite posets."""

__version__ = "0.1.0"
