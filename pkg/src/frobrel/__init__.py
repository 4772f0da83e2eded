"""Frobenius 2- and 3-structures in the category of finite relations."""

from . import bridges, catalog, diagrams, finrel, frl, frob2, frob3, kernels, search
from ._report import AxiomError, Report
from .finrel import FinRel, FinSet, Obj
from .frob2 import Frob2, Groupoid, check_frob2, check_groupoid
from .frob3 import Connector, Frob3, check_connector, check_frob3
from .frl import load, save

__version__ = "0.1.0"

__all__ = [
    "AxiomError",
    "Connector",
    "FinRel",
    "FinSet",
    "Frob2",
    "Frob3",
    "Groupoid",
    "Obj",
    "Report",
    "bridges",
    "catalog",
    "check_connector",
    "check_frob2",
    "check_frob3",
    "check_groupoid",
    "diagrams",
    "finrel",
    "frl",
    "frob2",
    "frob3",
    "kernels",
    "load",
    "save",
    "search",
]
