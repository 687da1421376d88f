"""Exact rational ground truth for every recursive system behind the formulas.

Everything here runs over :class:`fractions.Fraction`, so equalities are
exact and results are reduced fractions.  Three independent computation
paths are provided:

1. first-step recursions, solved as tridiagonal linear systems
   (:func:`solve_ruin_prob` and friends);
2. the closed forms themselves, evaluated in rational arithmetic
   (``closed_*``), used to certify the float evaluators in
   :mod:`polywalk.formulas`;
3. telescoping-difference recursions (``appendix_a_win_duration``,
   ``appendix_b_cover_time``) that rebuild the conditional durations from
   successive differences.

Agreement of all three paths, as identical reduced fractions, is the
package's core correctness gate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .types import DomainError

#: Denominators larger than this many bits abort a solve instead of letting a
#: runaway elimination degrade into multi-megabyte integers.
MAX_DENOMINATOR_BITS = 1_000_000

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DenominatorLimitError(ArithmeticError):
    """A rational elimination exceeded the configured denominator size."""


def as_probability(p) -> Fraction:
    """Coerce ``p`` to an exact Fraction strictly inside (0, 1).

    Accepts Fraction, int-ratio strings like ``"2/3"``, and other exact
    rationals.  Floats are rejected: their exact binary value is almost
    never the rational the caller meant.
    """
    if isinstance(p, float):
        raise DomainError("pass an exact rational (Fraction or 'a/b' string), not a float")
    if isinstance(p, str):
        p = Fraction(p)
    elif isinstance(p, Rational):
        p = Fraction(p)
    else:
        raise DomainError(f"cannot interpret {p!r} as an exact probability")
    if not _ZERO < p < _ONE:
        raise DomainError(f"probability must lie strictly inside (0, 1), got {p}")
    return p


@dataclass(frozen=True)
class FirstStepSystem:
    """Tridiagonal system from conditioning on the first step.

    Encodes ``x_k = rhs_k + down_k * x_{k-1} + up_k * x_{k+1}`` for
    ``k = 1..n`` with known boundary values ``x_0 = left`` and
    ``x_{n+1} = right``.  Each row's transition weights must be a
    probability split: ``down_k + up_k = 1`` with both non-negative.
    """

    down: tuple[Fraction, ...]
    up: tuple[Fraction, ...]
    rhs: tuple[Fraction, ...]
    left: Fraction
    right: Fraction

    def __post_init__(self) -> None:
        n = len(self.down)
        if n == 0 or len(self.up) != n or len(self.rhs) != n:
            raise DomainError("down/up/rhs must be equal-length, non-empty")
        for a, b in zip(self.down, self.up):
            if a < 0 or b < 0 or a + b != 1:
                raise DomainError(f"row weights must be a probability split, got ({a}, {b})")

    def solve(self, max_denominator_bits: int = MAX_DENOMINATOR_BITS) -> list[Fraction]:
        """Exact solution by forward elimination and back substitution.

        The pivot ``1 - down_k * beta_{k-1}`` stays positive because the
        running coefficient ``beta`` stays inside [0, 1], so no pivoting is
        needed.
        """
        n = len(self.down)
        alpha = [Fraction(0)] * n
        beta = [Fraction(0)] * n
        alpha[0] = self.rhs[0] + self.down[0] * self.left
        beta[0] = self.up[0]
        for k in range(1, n):
            pivot = 1 - self.down[k] * beta[k - 1]
            alpha[k] = (self.rhs[k] + self.down[k] * alpha[k - 1]) / pivot
            beta[k] = self.up[k] / pivot
            bits = max(alpha[k].denominator.bit_length(), beta[k].denominator.bit_length())
            if bits > max_denominator_bits:
                raise DenominatorLimitError(
                    f"denominator exceeded {max_denominator_bits} bits during elimination"
                )
        x = [Fraction(0)] * n
        x[n - 1] = alpha[n - 1] + beta[n - 1] * self.right
        for k in range(n - 2, -1, -1):
            x[k] = alpha[k] + beta[k] * x[k + 1]
        return x


def _check_ruin_bounds(i: int, n: int) -> None:
    if n < 1:
        raise DomainError(f"target must be >= 1, got {n}")
    if not 0 <= i <= n:
        raise DomainError(f"start must satisfy 0 <= start <= target, got start={i}, target={n}")


# --------------------------------------------------------------------------
# First-step solves (path 1).
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _ruin_prob_vector(n: int, p: Fraction) -> tuple[Fraction, ...]:
    """Win probabilities from every start 0..n, solved from the recursion."""
    if n == 1:
        return (_ZERO, _ONE)
    q = 1 - p
    system = FirstStepSystem(
        down=(q,) * (n - 1), up=(p,) * (n - 1), rhs=(_ZERO,) * (n - 1), left=_ZERO, right=_ONE
    )
    return (_ZERO, *system.solve(), _ONE)


@lru_cache(maxsize=None)
def _duration_vector(n: int, p: Fraction) -> tuple[Fraction, ...]:
    """Expected game lengths from every start 0..n."""
    if n == 1:
        return (_ZERO, _ZERO)
    q = 1 - p
    system = FirstStepSystem(
        down=(q,) * (n - 1), up=(p,) * (n - 1), rhs=(_ONE,) * (n - 1), left=_ZERO, right=_ZERO
    )
    return (_ZERO, *system.solve(), _ZERO)


@lru_cache(maxsize=None)
def _win_duration_vector(n: int, p: Fraction) -> tuple[Fraction, ...]:
    """Win-conditioned expected game lengths from starts 1..n.

    From start 1 a win forces a won first bet, pinning the first row; the
    interior rows use the Bayes posterior of a won first bet given an
    eventual win as the downhill/uphill split.
    """
    if n == 1:
        return (_ZERO,)
    probs = _ruin_prob_vector(n, p)
    down = [_ZERO]
    up = [_ONE]
    rhs = [_ONE]
    for k in range(2, n):
        f = p * probs[k + 1] / probs[k]
        down.append(1 - f)
        up.append(f)
        rhs.append(_ONE)
    system = FirstStepSystem(
        down=tuple(down), up=tuple(up), rhs=tuple(rhs), left=_ZERO, right=_ZERO
    )
    return (*system.solve(), _ZERO)


def solve_ruin_prob(i: int, n: int, p) -> Fraction:
    """Exact win probability from the first-step recursion."""
    _check_ruin_bounds(i, n)
    return _ruin_prob_vector(n, as_probability(p))[i]


def solve_expected_duration(i: int, n: int, p) -> Fraction:
    """Exact expected number of bets from the first-step recursion."""
    _check_ruin_bounds(i, n)
    return _duration_vector(n, as_probability(p))[i]


def solve_conditional_win_duration(i: int, n: int, p) -> Fraction:
    """Exact win-conditioned duration from the first-step recursion."""
    _check_ruin_bounds(i, n)
    if i == 0:
        raise DomainError("win-conditioned duration is undefined from a broke start")
    return _win_duration_vector(n, as_probability(p))[i - 1]


def solve_conditional_broke_duration(i: int, n: int, p) -> Fraction:
    """Exact ruin-conditioned duration, via the mirrored win-conditioned game."""
    _check_ruin_bounds(i, n)
    if i == n:
        raise DomainError("ruin-conditioned duration is undefined from the target fortune")
    return solve_conditional_win_duration(n - i, n, 1 - as_probability(p))


def first_win_posterior_exact(i: int, n: int, p) -> Fraction:
    """Exact posterior of a won first bet given an eventual win."""
    _check_ruin_bounds(i, n)
    if not 1 <= i <= n - 1:
        raise DomainError(f"posterior requires 1 <= start <= target - 1, got start={i}, target={n}")
    p = as_probability(p)
    probs = _ruin_prob_vector(n, p)
    return p * probs[i + 1] / probs[i]


@lru_cache(maxsize=None)
def _last_vertex_vector(m: int, p: Fraction) -> tuple[Fraction, ...]:
    if m == 1:
        return (_ONE,)
    first = _ruin_prob_vector(m, 1 - p)[1]
    last = _ruin_prob_vector(m, p)[1]
    if m == 2:
        return (first, last)
    q = 1 - p
    # Interior recursion walks the *label*, so clockwise probability feeds
    # the lower neighbor.
    system = FirstStepSystem(
        down=(p,) * (m - 2), up=(q,) * (m - 2), rhs=(_ZERO,) * (m - 2), left=first, right=last
    )
    return (first, *system.solve(), last)


def solve_last_vertex_pmf(m: int, p) -> list[Fraction]:
    """Exact last-vertex distribution (entries for vertices 1..m)."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return list(_last_vertex_vector(m, as_probability(p)))


@lru_cache(maxsize=None)
def _cover_time_vector(m: int, p: Fraction) -> tuple[Fraction, ...]:
    if m == 1:
        return (_ONE,)
    if m == 2:
        # No interior ruin phase on a triangle: one step, then a plain ruin
        # game on the cut-open cycle of length 3.
        durations = _duration_vector(3, p)
        return (1 + durations[1], 1 + durations[2])
    v_first = (
        1
        + solve_conditional_broke_duration(m - 2, m, p)
        + _duration_vector(m + 1, p)[1]
    )
    v_last = (
        1
        + solve_conditional_win_duration(2, m, p)
        + _duration_vector(m + 1, p)[m]
    )
    q = 1 - p
    system = FirstStepSystem(
        down=(q,) * (m - 2), up=(p,) * (m - 2), rhs=(_ONE,) * (m - 2), left=v_first, right=v_last
    )
    return (v_first, *system.solve(), v_last)


def solve_conditional_cover_time(m: int, p) -> list[Fraction]:
    """Exact cover times conditioned on each possible last vertex 1..m."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return list(_cover_time_vector(m, as_probability(p)))


# Composite exact quantities assembled from the solves.


def cover_before_return_prob_exact(m: int, p) -> Fraction:
    """Exact cover-before-return probability from the two one-step branches."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    p = as_probability(p)
    q = 1 - p
    return p * _ruin_prob_vector(m, p)[1] + q * _ruin_prob_vector(m, q)[1]


def expected_cover_time_exact(m: int, p) -> Fraction:
    """Exact expected cover time as the pmf-weighted conditional sum."""
    p = as_probability(p)
    pmf = solve_last_vertex_pmf(m, p)
    cover = solve_conditional_cover_time(m, p)
    return sum((w * v for w, v in zip(pmf, cover)), _ZERO)


def expected_return_after_cover_exact(m: int, p) -> Fraction:
    """Exact expected return time after covering, weighted over last vertices."""
    p = as_probability(p)
    pmf = solve_last_vertex_pmf(m, p)
    durations = _duration_vector(m + 1, p)
    return sum((w * durations[i] for i, w in enumerate(pmf, start=1)), _ZERO)


# --------------------------------------------------------------------------
# Closed forms in rational arithmetic (path 2).
# --------------------------------------------------------------------------


def closed_ruin_win_prob(i: int, n: int, p) -> Fraction:
    _check_ruin_bounds(i, n)
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction(i, n)
    return (r**i - 1) / (r**n - 1)


def closed_ruin_expected_duration(i: int, n: int, p) -> Fraction:
    _check_ruin_bounds(i, n)
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction(i * (n - i))
    return (r + 1) / (r - 1) * (i - n * (r**i - 1) / (r**n - 1))


def closed_conditional_win_duration(i: int, n: int, p) -> Fraction:
    _check_ruin_bounds(i, n)
    if i == 0:
        raise DomainError("win-conditioned duration is undefined from a broke start")
    if i == n:
        return _ZERO
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction((n - i) * (n + i), 3)
    return (r + 1) / (r - 1) * (n * (r**n + 1) / (r**n - 1) - i * (r**i + 1) / (r**i - 1))


def closed_conditional_broke_duration(i: int, n: int, p) -> Fraction:
    _check_ruin_bounds(i, n)
    if i == n:
        raise DomainError("ruin-conditioned duration is undefined from the target fortune")
    if i == 0:
        return _ZERO
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction(i * (2 * n - i), 3)
    return (
        (r + 1)
        / (r - 1)
        * (n * (r**n + 1) / (r**n - 1) - (n - i) * (r ** (n - i) + 1) / (r ** (n - i) - 1))
    )


def closed_first_win_posterior(i: int, n: int, p) -> Fraction:
    _check_ruin_bounds(i, n)
    if not 1 <= i <= n - 1:
        raise DomainError(f"posterior requires 1 <= start <= target - 1, got start={i}, target={n}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction(i + 1, 2 * i)
    return Fraction(1) / (r + 1) * (r ** (i + 1) - 1) / (r**i - 1)


def closed_cover_before_return_prob(m: int, p) -> Fraction:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction(1, m)
    return (r - 1) / (r + 1) * (r**m + 1) / (r**m - 1)


def closed_last_vertex_pmf(m: int, p) -> list[Fraction]:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return [Fraction(1, m)] * m
    denom = r**m - 1
    return [r ** (m - i) * (r - 1) / denom for i in range(1, m + 1)]


def closed_conditional_cover_time(m: int, p) -> list[Fraction]:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return [Fraction((m - 1) * (m + 1), 3) + (m + 1 - i) * i for i in range(1, m + 1)]
    rho = (r + 1) / (r - 1)
    return [
        rho
        * (
            m
            + i
            - 1
            - 2 / (r - 1)
            + 2 * m / (r**m - 1)
            - (m + 1) * (r**i - 1) / (r ** (m + 1) - 1)
        )
        for i in range(1, m + 1)
    ]


def closed_expected_cover_time(m: int, p) -> Fraction:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction(m * (m + 1), 2)
    rho = (r + 1) / (r - 1)
    return rho * (m - 1 / (r - 1) - m * m / (r**m - 1) + (m + 1) * (m + 1) / (r ** (m + 1) - 1))


def closed_expected_return_after_cover(m: int, p) -> Fraction:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        return Fraction((m + 1) * (m + 2), 6)
    rho = (r + 1) / (r - 1)
    return rho * (
        r / (r - 1) - m * (m + 2) / (r**m - 1) + (m + 1) * (m + 1) / (r ** (m + 1) - 1)
    )


# --------------------------------------------------------------------------
# Telescoping-difference path (path 3).
# --------------------------------------------------------------------------


def square_sum_terms(count: int) -> list[Fraction]:
    """Terms T_1..T_count of T_1 = 1, T_j = T_{j-1} + j**2.

    These scale the successive differences of fair-case win-conditioned
    durations; T_j telescopes to j(j+1)(2j+1)/6.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    terms = [_ONE]
    for j in range(2, count + 1):
        terms.append(terms[-1] + j * j)
    return terms


def geometric_square_terms(r: Fraction, count: int) -> list[Fraction]:
    """Terms U_1..U_count of U_1 = 1, U_j = r*U_{j-1} + (1 + r + ... + r**(j-1))**2.

    The asymmetric analogue of :func:`square_sum_terms`; at r = 1 the two
    recursions coincide.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    r = Fraction(r)
    terms = [_ONE]
    geometric = _ONE
    power = _ONE
    for _ in range(2, count + 1):
        power *= r
        geometric += power
        terms.append(r * terms[-1] + geometric * geometric)
    return terms


def appendix_a_win_duration(i: int, n: int, p) -> Fraction:
    """Win-conditioned duration rebuilt from telescoping differences.

    Builds the scaled-difference terms by their recursion, unscales them
    into successive duration gaps, and sums the gaps down from the zero
    boundary at the target fortune.  Must agree exactly with
    :func:`solve_conditional_win_duration`.
    """
    _check_ruin_bounds(i, n)
    if i == 0:
        raise DomainError("win-conditioned duration is undefined from a broke start")
    p = as_probability(p)
    if i == n:
        return _ZERO
    r = (1 - p) / p
    if r == 1:
        terms = square_sum_terms(n - 1)
        gaps = [2 * terms[j - 1] / (j * (j + 1)) for j in range(1, n)]
    else:
        terms = geometric_square_terms(r, n - 1)
        scale = (r - 1) * (r - 1) * (r + 1)
        powers = [_ONE]
        for _ in range(n):
            powers.append(powers[-1] * r)
        gaps = [
            terms[j - 1] * scale / ((powers[j] - 1) * (powers[j + 1] - 1)) for j in range(1, n)
        ]
    return sum(gaps[i - 1 :], _ZERO)


def cover_time_diff_terms(m: int, p) -> list[Fraction]:
    """Successive differences d_2..d_m of the conditional cover times.

    Seeded by the boundary construction and advanced by
    ``d_{j+1} = r*d_j - (r + 1)`` (``d_{j+1} = d_j - 2`` in the fair case).
    """
    if m < 3:
        raise DomainError(f"the difference recursion needs m >= 3, got {m}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        d = Fraction(m - 2)
        diffs = [d]
        for _ in range(3, m + 1):
            d = d - 2
            diffs.append(d)
        return diffs
    rho = (r + 1) / (r - 1)
    d = rho - (m + 1) * r * (r + 1) / (r ** (m + 1) - 1)
    diffs = [d]
    for _ in range(3, m + 1):
        d = r * d - (r + 1)
        diffs.append(d)
    return diffs


def appendix_b_cover_time(m: int, p) -> list[Fraction]:
    """Conditional cover times rebuilt from the difference recursion.

    Starts from the first conditional cover time and accumulates the
    differences of :func:`cover_time_diff_terms`.  Must agree exactly with
    :func:`solve_conditional_cover_time`; needs m >= 3 because the seed
    values come from the nondegenerate boundary construction.
    """
    if m < 3:
        raise DomainError(f"the difference recursion needs m >= 3, got {m}")
    p = as_probability(p)
    r = (1 - p) / p
    if r == 1:
        v = 1 + Fraction((m - 2) * (m + 2), 3) + m
    else:
        rho = (r + 1) / (r - 1)
        v = rho * (
            m - 2 / (r - 1) + 2 * m / (r**m - 1) - (m + 1) * (r - 1) / (r ** (m + 1) - 1)
        )
    values = [v]
    for d in cover_time_diff_terms(m, p):
        v = v + d
        values.append(v)
    return values


@dataclass(frozen=True)
class RecurrenceTrace:
    """The raw term sequences behind the telescoping path, for inspection."""

    square_sums: tuple[Fraction, ...]
    geometric_square_sums: tuple[Fraction, ...]
    cover_diffs: tuple[Fraction, ...]


def recurrence_trace(size: int, p) -> RecurrenceTrace:
    """Build all telescoping term sequences up to ``size`` for odds from ``p``."""
    p = as_probability(p)
    r = (1 - p) / p
    diffs = tuple(cover_time_diff_terms(size, p)) if size >= 3 else ()
    return RecurrenceTrace(
        square_sums=tuple(square_sum_terms(size)),
        geometric_square_sums=tuple(geometric_square_terms(r, size)),
        cover_diffs=diffs,
    )
