"""Closed-form evaluation of ruin and polygon-cover quantities over floats.

Every quantity has two branches: a polynomial one for the fair walk
(``p = 1/2``, odds ratio 1) and a geometric one in the odds ratio
``r = (1 - p)/p`` otherwise.  The geometric branch is full of expressions
like ``(r**i - 1)/(r**N - 1)`` whose naive evaluation overflows once
``N * |ln r|`` passes ~709 and loses precision catastrophically near
``r = 1``.  Both problems are handled the same way: all powers are taken
through ``expm1``/``exp`` with non-positive arguments (flipping to inverse
powers of ``r`` when ``r > 1``), so nothing ever overflows and the ``r -> 1``
limit stays accurate down to the hand-off point.

The hand-off itself is a fixed policy: instances with
``|p - 1/2| <= SYMMETRY_EPS`` take the fair branch.  The test suite bounds
the residual hand-off error by checking both branches against each other at
``p = 1/2 +- 1e-6``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .types import DomainError, PolygonSpec, RuinSpec, _check_probability

SYMMETRY_EPS = 1e-9


class Regime(enum.Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


@dataclass(frozen=True)
class RegimeTag:
    """Which formula branch an instance takes, plus its odds ratio."""

    kind: Regime
    odds: float


def odds_ratio(p: float) -> float:
    """Odds of a counterclockwise step (a lost bet): ``(1 - p)/p``."""
    _check_probability(p)
    return (1.0 - p) / p


def is_symmetric(p: float) -> bool:
    return abs(p - 0.5) <= SYMMETRY_EPS


def regime_of(p: float) -> RegimeTag:
    _check_probability(p)
    kind = Regime.SYMMETRIC if is_symmetric(p) else Regime.ASYMMETRIC
    return RegimeTag(kind, (1.0 - p) / p)


# --------------------------------------------------------------------------
# Overflow-safe building blocks.  x = ln r, k/a/b are non-negative integer
# exponents.  Each helper keeps every expm1/exp argument non-positive when
# x > 0, so r**k is never formed directly.
# --------------------------------------------------------------------------


def _ln_odds(p: float) -> float:
    # ln((1-p)/p) via log1p((1-2p)/p); 1-2p is exact near p = 1/2.
    return math.log1p((1.0 - 2.0 * p) / p)


def _inv_powm1(x: float, k: float) -> float:
    """1 / (r**k - 1)."""
    t = k * x
    if t <= 0.0:
        return 1.0 / math.expm1(t)
    return -math.exp(-t) / math.expm1(-t)


def _coth_ratio(x: float, k: float) -> float:
    """(r**k + 1) / (r**k - 1)."""
    return 1.0 + 2.0 * _inv_powm1(x, k)


def _powm1_ratio(x: float, a: float, b: float) -> float:
    """(r**a - 1) / (r**b - 1)."""
    if x <= 0.0:
        return math.expm1(a * x) / math.expm1(b * x)
    return math.exp((a - b) * x) * math.expm1(-a * x) / math.expm1(-b * x)


def _pow_over_powm1(x: float, j: float, k: float) -> float:
    """r**j / (r**k - 1) for 0 <= j < k."""
    if x <= 0.0:
        return math.exp(j * x) / math.expm1(k * x)
    return -math.exp((j - k) * x) / math.expm1(-k * x)


# --------------------------------------------------------------------------
# Gambler's ruin.
# --------------------------------------------------------------------------


def ruin_win_prob(spec: RuinSpec) -> float:
    """Probability of reaching the target fortune before going broke."""
    i, n = spec.start, spec.target
    if i == 0:
        return 0.0
    if i == n:
        return 1.0
    if is_symmetric(spec.p):
        return i / n
    return _powm1_ratio(_ln_odds(spec.p), i, n)


def ruin_expected_duration(spec: RuinSpec) -> float:
    """Expected number of bets until the game ends (either way)."""
    i, n = spec.start, spec.target
    if i == 0 or i == n:
        return 0.0
    if is_symmetric(spec.p):
        return float(i * (n - i))
    x = _ln_odds(spec.p)
    return _coth_ratio(x, 1) * (i - n * _powm1_ratio(x, i, n))


def conditional_duration_given_win(spec: RuinSpec) -> float:
    """Expected bets played, given the gambler quits a winner.

    Defined for 1 <= start <= target; the conditioning event has probability
    zero from a broke start.
    """
    i, n = spec.start, spec.target
    if i == 0:
        raise DomainError("duration given a win is undefined from a broke start (start=0)")
    if i == n:
        return 0.0
    if is_symmetric(spec.p):
        return (n - i) * (n + i) / 3
    x = _ln_odds(spec.p)
    return _coth_ratio(x, 1) * (n * _coth_ratio(x, n) - i * _coth_ratio(x, i))


def conditional_duration_given_broke(spec: RuinSpec) -> float:
    """Expected bets played, given the gambler goes broke.

    Defined for 0 <= start <= target - 1; mirrors the win-conditioned
    duration under start -> target - start.
    """
    i, n = spec.start, spec.target
    if i == n:
        raise DomainError("duration given ruin is undefined from the target fortune (start=target)")
    if i == 0:
        return 0.0
    if is_symmetric(spec.p):
        return i * (2 * n - i) / 3
    x = _ln_odds(spec.p)
    return _coth_ratio(x, 1) * (n * _coth_ratio(x, n) - (n - i) * _coth_ratio(x, n - i))


def posterior_first_win_given_win(spec: RuinSpec) -> float:
    """Probability the first bet was won, given the gambler quits a winner."""
    i, n = spec.start, spec.target
    if not 1 <= i <= n - 1:
        raise DomainError(f"posterior requires 1 <= start <= target - 1, got start={i}, target={n}")
    if is_symmetric(spec.p):
        return (i + 1) / (2 * i)
    # p = 1/(1 + r) exactly, so this is p * (r**(i+1) - 1)/(r**i - 1).
    return spec.p * _powm1_ratio(_ln_odds(spec.p), i + 1, i)


# --------------------------------------------------------------------------
# Polygon walk.
# --------------------------------------------------------------------------


def cover_before_return_prob(spec: PolygonSpec) -> float:
    """Probability all vertices are visited before the first return to 0."""
    if is_symmetric(spec.p):
        return 1 / spec.m
    x = _ln_odds(spec.p)
    return _coth_ratio(x, spec.m) / _coth_ratio(x, 1)


def last_vertex_pmf(spec: PolygonSpec) -> list[float]:
    """Distribution of the last vertex visited; entry ``k`` is vertex ``k + 1``.

    A truncated geometric on 1..m with weights proportional to inverse
    powers of the odds ratio; uniform in the fair case.
    """
    m = spec.m
    if is_symmetric(spec.p):
        return [1 / m] * m
    x = _ln_odds(spec.p)
    em1 = math.expm1(x)
    return [em1 * _pow_over_powm1(x, m - i, m) for i in range(1, m + 1)]


def conditional_cover_time(spec: PolygonSpec, i: int) -> float:
    """Expected steps to visit all vertices, given the last vertex is ``i``.

    For m <= 2 the general boundary construction degenerates (there is no
    interior gambler's-ruin phase), so those sizes are evaluated directly:
    one step covers a 2-gon, and on a triangle the walk is one step plus an
    ordinary ruin game on the cut-open cycle.
    """
    m = spec.m
    if not 1 <= i <= m:
        raise DomainError(f"vertex index must satisfy 1 <= i <= m, got i={i}, m={m}")
    if m == 1:
        return 1.0
    if m == 2:
        return 1.0 + ruin_expected_duration(RuinSpec(i, 3, spec.p))
    if is_symmetric(spec.p):
        return (m - 1) * (m + 1) / 3 + (m + 1 - i) * i
    x = _ln_odds(spec.p)
    inner = (
        (m + i - 1)
        - 2.0 * _inv_powm1(x, 1)
        + 2.0 * m * _inv_powm1(x, m)
        - (m + 1) * _powm1_ratio(x, i, m + 1)
    )
    return _coth_ratio(x, 1) * inner


def expected_cover_time(spec: PolygonSpec) -> float:
    """Expected steps to visit all vertices of the polygon."""
    m = spec.m
    if is_symmetric(spec.p):
        return m * (m + 1) / 2
    x = _ln_odds(spec.p)
    inner = (
        m
        - _inv_powm1(x, 1)
        - m * m * _inv_powm1(x, m)
        + (m + 1) * (m + 1) * _inv_powm1(x, m + 1)
    )
    return _coth_ratio(x, 1) * inner


def expected_return_after_cover(spec: PolygonSpec) -> float:
    """Expected additional steps to re-enter vertex 0 once all are visited."""
    m = spec.m
    if is_symmetric(spec.p):
        return (m + 1) * (m + 2) / 6
    x = _ln_odds(spec.p)
    # r/(r-1) = 1 + 1/(r-1)
    inner = (
        1.0
        + _inv_powm1(x, 1)
        - m * (m + 2) * _inv_powm1(x, m)
        + (m + 1) * (m + 1) * _inv_powm1(x, m + 1)
    )
    return _coth_ratio(x, 1) * inner


def stationary_distribution(spec: PolygonSpec) -> list[float]:
    """Long-run occupation law: uniform over the m + 1 vertices, for any p."""
    return [1 / (spec.m + 1)] * (spec.m + 1)


def mean_recurrence_time(spec: PolygonSpec) -> float:
    """Expected steps to return to any fixed vertex starting from it: m + 1."""
    return float(spec.m + 1)
