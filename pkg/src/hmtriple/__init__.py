"""Exact desk-scale verification of homotopy Manin triples built from Thom-Whitney models."""

from .lie import LieStructure, builtin_sl2
from .local import LocalTripleContext
from .globalmodels import GlobalContext
from .pairing import manin_triple_report
from .scalars import ExpansionWindow

__version__ = "0.1.0"

__all__ = [
    "ExpansionWindow",
    "GlobalContext",
    "LieStructure",
    "LocalTripleContext",
    "builtin_sl2",
    "manin_triple_report",
    "__version__",
]
