"""Symbolic CTLK model checking for knowledge-oriented Petri nets."""

from .checker import Checker, check, check_formula
from .ctlk import parse_formula, to_enf, to_text
from .net import Kpn, KpnBuilder, KpnError
from .ordering import noack_order, structural_order
from .symbolic import SymContext

__all__ = [
    "Checker", "check", "check_formula", "parse_formula", "to_enf", "to_text",
    "Kpn", "KpnBuilder", "KpnError", "noack_order", "structural_order", "SymContext",
]
__version__ = "0.1.0"
