"""Polynomial de Rham forms on simplicial sets, with compact supports.

Exact rational arithmetic throughout (``gmpy2.mpq``).
"""

from .nabla import PolyForm, extend
from .simplicial import SimplexRef, SimplicialMap, SimplicialSet, SubSet
from .forms import GlobalForm, TruncatedComplex
from .cochains import CochainComplex, cohomology

__all__ = [
    "CochainComplex",
    "GlobalForm",
    "PolyForm",
    "SimplexRef",
    "SimplicialMap",
    "SimplicialSet",
    "SubSet",
    "TruncatedComplex",
    "cohomology",
    "extend",
]
__version__ = "0.1.0"
