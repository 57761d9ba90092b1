"""Finite examples: box picking and optimal stopping."""
