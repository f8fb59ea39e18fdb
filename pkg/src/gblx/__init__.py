"""Finite-model toolkit for GBL, Lukasiewicz and their modal and tense expansions."""
from .algebra import FiniteAlgebra, classify, direct_product, lukasiewicz_chain
from .errors import GblxError
from .syntax import parse, to_text

__all__ = ["FiniteAlgebra", "GblxError", "classify", "direct_product", "lukasiewicz_chain", "parse", "to_text"]
__version__ = "0.1.0"
