from .gauss import G, g
from .parser import ParseError, format_element, parse
from .rep import rep_check
from .torus import FORMAL, ONE, AlgebraMismatch, Element, NotInvertible, QuantumTorus, Scalar

__all__ = [
    "FORMAL",
    "ONE",
    "AlgebraMismatch",
    "Element",
    "G",
    "NotInvertible",
    "ParseError",
    "QuantumTorus",
    "Scalar",
    "format_element",
    "g",
    "parse",
    "rep_check",
]
