"""Exact homological algebra of local systems over finite groupoids.

Chain complexes over F_p and Q, finite groupoids with full composition
tables, local systems with their six-functor operations, the total category
of systems over varying bases, and a JSON text format with a command line.
"""

from .chain import ChainComplex, ChainMap, homology
from .codec import Document, decode, encode
from .errors import LocsysError
from .groupoid import FinGroupoid, GroupoidFunctor
from .integral import LocMorphism, LocObject
from .linalg import Field, Matrix
from .local_systems import LocalSystem, SystemMap
from .simplicial import TruncSimplicialComplex, TruncSimplicialMap

__all__ = [
    "ChainComplex",
    "ChainMap",
    "Document",
    "Field",
    "FinGroupoid",
    "GroupoidFunctor",
    "LocMorphism",
    "LocObject",
    "LocalSystem",
    "LocsysError",
    "Matrix",
    "SystemMap",
    "TruncSimplicialComplex",
    "TruncSimplicialMap",
    "decode",
    "encode",
    "homology",
]
