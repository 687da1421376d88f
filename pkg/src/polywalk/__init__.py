"""Analytics for gambler's ruin and cyclic cover walks, three ways.

Closed-form evaluators (:mod:`polywalk.formulas`), an exact rational
first-step oracle (:mod:`polywalk.oracle`), and a reproducible Monte Carlo
simulator (:mod:`polywalk.simulate`) for the same family of quantities,
cross-validated by :mod:`polywalk.verify` and exposed through the
``polywalk`` command line (:mod:`polywalk.cli`).
"""

from .formulas import (
    Regime,
    RegimeTag,
    SYMMETRY_EPS,
    conditional_cover_time,
    conditional_duration_given_broke,
    conditional_duration_given_win,
    cover_before_return_prob,
    expected_cover_time,
    expected_return_after_cover,
    last_vertex_pmf,
    mean_recurrence_time,
    odds_ratio,
    posterior_first_win_given_win,
    regime_of,
    ruin_expected_duration,
    ruin_win_prob,
    stationary_distribution,
)
from .simulate import (
    CoverOutcome,
    Estimate,
    PolygonSimResult,
    RuinOutcome,
    RuinSimResult,
    SimConfig,
    kernel_backend,
    polygon_outcome,
    ruin_outcome,
    simulate_occupancy,
    simulate_polygon,
    simulate_ruin,
)
from .types import DomainError, PolygonSpec, RuinSpec

__version__ = "0.1.0"

__all__ = [
    "CoverOutcome",
    "DomainError",
    "Estimate",
    "PolygonSimResult",
    "PolygonSpec",
    "Regime",
    "RegimeTag",
    "RuinOutcome",
    "RuinSimResult",
    "RuinSpec",
    "SYMMETRY_EPS",
    "SimConfig",
    "conditional_cover_time",
    "conditional_duration_given_broke",
    "conditional_duration_given_win",
    "cover_before_return_prob",
    "expected_cover_time",
    "expected_return_after_cover",
    "kernel_backend",
    "last_vertex_pmf",
    "mean_recurrence_time",
    "odds_ratio",
    "polygon_outcome",
    "posterior_first_win_given_win",
    "regime_of",
    "ruin_expected_duration",
    "ruin_outcome",
    "ruin_win_prob",
    "simulate_occupancy",
    "simulate_polygon",
    "simulate_ruin",
    "stationary_distribution",
]
