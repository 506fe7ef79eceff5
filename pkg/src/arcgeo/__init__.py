"""arcgeo: computational finite geometry in small projective planes.

Construction, verification and exhaustive search for blocked arcs, dual
3-nets, conic groups and weighted white/black point configurations over
small Galois fields.
"""

__version__ = "0.1.0"

from .fields import FieldSpec, FieldElement, field_from_order
from .plane import ProjPoint, ProjLine, Conic

__all__ = [
    "FieldSpec",
    "FieldElement",
    "field_from_order",
    "ProjPoint",
    "ProjLine",
    "Conic",
    "__version__",
]
