"""Bivariant theories on the finite-set site."""
from .checks import ALL_CHECKS, AXIOMS, TRANSFORM_CHECKS, run_check, strong_inverse, theory_for
from .ideal import closure_check, ideal_span
from .site import FibreProduct, FinMap, all_maps, fibre_product, identity, is_cartesian, random_map, to_point
from .theory import (
    MUTATIONS,
    MultFn,
    MultTheory,
    SpanCycle,
    SpanTheory,
    m_product,
    m_pullback,
    m_pushforward,
    t_product,
    t_pullback,
    t_pushforward,
    theta,
    to_target,
    unit,
)
