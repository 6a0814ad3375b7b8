"""Quadratic maps between finite groups, universal quadratic groups Q(G,B) and Passi groups P_n(G,B)."""

__version__ = "0.1.0"

from .abelian import AbMap, AbSub, FgAb, Lattice, TensorSquare, ExteriorSquare, smith
from .checks import Report
from .errors import CapExceeded, CheckFailed, InvalidInput, ParseError, QuadGroupError
from .groups import FiniteGroup, GroupHom, Subgroup, builtin
from .passi import PassiGroup, is_polynomial, passi_group
from .quadmaps import GroupFunction, identity_suite, quadratic_verdict
from .universal_q import QGroup, build_q
from .verify import prop29_check, run_battery, thm210_check

__all__ = [
    "AbMap", "AbSub", "CapExceeded", "CheckFailed", "ExteriorSquare", "FgAb", "FiniteGroup", "GroupFunction",
    "GroupHom", "InvalidInput", "Lattice", "ParseError", "PassiGroup", "QGroup", "QuadGroupError", "Report",
    "Subgroup", "TensorSquare", "build_q", "builtin", "identity_suite", "is_polynomial", "passi_group",
    "prop29_check", "quadratic_verdict", "run_battery", "smith", "thm210_check",
]
