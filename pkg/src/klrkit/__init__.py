"""Exact computations with KLR algebras, cyclotomic quotients and quantum affine R-matrices."""

__version__ = "0.1.0"
