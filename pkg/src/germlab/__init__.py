"""Exact classification tools for germs of families of symmetric matrices."""

from .polyring import Polynomial, SymMatrixGerm, VectorFieldJet, parse_polynomial, sym

__version__ = "0.1.0"

__all__ = ["Polynomial", "SymMatrixGerm", "VectorFieldJet", "parse_polynomial", "sym", "__version__"]
