"""Exact graded rings: the coefficient substrate for everything else."""
from .lattice import hermite_normal_form, rref_rational, smith_invariants
from .ring import (
    QQ,
    ZZ,
    GradedRing,
    RelationError,
    RingElement,
    RingHom,
    WeightOverflowError,
    laurent_ring,
    normal_form,
    ring_hom,
    ring_new,
)
from .syntax import ParseError, parse_rational

__all__ = [
    "QQ", "ZZ", "GradedRing", "RelationError", "RingElement", "RingHom",
    "WeightOverflowError", "laurent_ring", "normal_form", "ring_hom", "ring_new",
    "hermite_normal_form", "rref_rational", "smith_invariants", "ParseError",
    "parse_rational",
]
