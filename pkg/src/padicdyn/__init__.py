"""Minimal decomposition of polynomial dynamics on the p-adic integers."""

from .classify import Behavior, CycleData, classify, cycle_data, growth_test_p3_level1
from .decomposition import (
    BasinBall,
    Decomposition,
    MinimalComponent,
    PeriodicOrbitApprox,
    Target,
    UndecidedBall,
    components_near_orbit,
    is_partition,
    minimal_decomposition,
    possible_periods,
    structure_sequence,
)
from .induced import Ball, Cycle, find_cycles, induced_map
from .lift_engine import Fate, LiftNode, build_lift_tree, predict_fate
from .oracle import (
    basin_bruteforce,
    cross_check,
    is_minimal_bruteforce,
    periodic_points_bruteforce,
    transitive_mod,
)
from .padic_core import (
    DomainError,
    IntegrityError,
    PadicError,
    PrecisionError,
    ResourceError,
    Valuation,
    vp,
)
from .poly import IntPoly, normal_form_2adic
from .quad2_fixtures import QuadFixture, closed_form, verify_against_engine

__version__ = "0.1.0"

__all__ = [
    "Ball", "BasinBall", "Behavior", "Cycle", "CycleData", "Decomposition", "DomainError",
    "Fate", "IntPoly", "IntegrityError", "LiftNode", "MinimalComponent", "PadicError",
    "PeriodicOrbitApprox", "PrecisionError", "QuadFixture", "ResourceError", "Target",
    "UndecidedBall", "Valuation", "basin_bruteforce", "build_lift_tree", "classify",
    "closed_form", "components_near_orbit", "cross_check", "cycle_data", "find_cycles",
    "growth_test_p3_level1", "induced_map", "is_minimal_bruteforce", "is_partition",
    "minimal_decomposition", "normal_form_2adic", "periodic_points_bruteforce",
    "possible_periods", "predict_fate", "structure_sequence", "transitive_mod",
    "verify_against_engine", "vp",
]
