"""Cross-validation suite: closed forms vs exact oracle vs identities.

Each check is a self-contained function returning a :class:`CheckResult`;
:func:`run_verification` runs them all over a configurable grid.  The
checks fall into three groups:

* exact rational equality between the first-step solves, the rational
  closed forms, and the telescoping-difference path;
* floating-point fidelity of :mod:`polywalk.formulas` against the oracle,
  including the deep-asymmetry regime where naive evaluation overflows;
* structural identities of the formulas themselves (probability swaps,
  decomposition of the unconditional duration, pmf normalization,
  weighted-sum consistency, continuity across the fair-case hand-off).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import formulas, oracle
from .types import PolygonSpec, RuinSpec

DEFAULT_P_LIST = (
    Fraction(1, 5),
    Fraction(1, 3),
    Fraction(2, 5),
    Fraction(1, 2),
    Fraction(3, 5),
    Fraction(2, 3),
    Fraction(4, 5),
)

#: 99-point probability grid 0.01..0.99 used by the float identity checks.
P_GRID_99 = [k / 100 for k in range(1, 100)]

IDENTITY_SIZE_LIMIT = 64


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


class _Worst:
    """Tracks the largest deviation seen and where it happened."""

    def __init__(self) -> None:
        self.value = -1.0
        self.where = ""
        self.count = 0

    def update(self, deviation: float, where: str) -> None:
        self.count += 1
        if deviation > self.value:
            self.value = deviation
            self.where = where

    def result(self, name: str, tolerance: float) -> CheckResult:
        detail = f"{self.count} instances, worst {max(self.value, 0.0):.3e} at {self.where or 'n/a'}"
        return CheckResult(name, self.value <= tolerance, detail)


def _rel(actual: float, reference: float) -> float:
    return abs(actual - reference) / max(abs(reference), 1e-300)


# --------------------------------------------------------------------------
# Exact rational checks.
# --------------------------------------------------------------------------


def check_oracle_equality(max_n: int, p_list=DEFAULT_P_LIST) -> CheckResult:
    """First-step solves equal the rational closed forms, fraction by fraction."""
    mismatches = []
    count = 0
    for p in p_list:
        for n in range(1, max_n + 1):
            for i in range(n + 1):
                pairs = [
                    ("win-prob", oracle.solve_ruin_prob(i, n, p), oracle.closed_ruin_win_prob(i, n, p)),
                    ("duration", oracle.solve_expected_duration(i, n, p), oracle.closed_ruin_expected_duration(i, n, p)),
                ]
                if i >= 1:
                    pairs.append((
                        "win-duration",
                        oracle.solve_conditional_win_duration(i, n, p),
                        oracle.closed_conditional_win_duration(i, n, p),
                    ))
                if i <= n - 1:
                    pairs.append((
                        "broke-duration",
                        oracle.solve_conditional_broke_duration(i, n, p),
                        oracle.closed_conditional_broke_duration(i, n, p),
                    ))
                for tag, got, want in pairs:
                    count += 1
                    if got != want:
                        mismatches.append(f"{tag}(i={i}, N={n}, p={p})")
        for m in range(1, max_n + 1):
            count += 2
            if oracle.solve_last_vertex_pmf(m, p) != oracle.closed_last_vertex_pmf(m, p):
                mismatches.append(f"last-vertex-pmf(m={m}, p={p})")
            if oracle.solve_conditional_cover_time(m, p) != oracle.closed_conditional_cover_time(m, p):
                mismatches.append(f"cover-time-by-last(m={m}, p={p})")
    # Pin one hand-checkable anchor: from 3 of 7 at one-third win odds the
    # win chance is (2**3 - 1)/(2**7 - 1).
    if max_n >= 7 and Fraction(1, 3) in tuple(p_list):
        count += 1
        if oracle.solve_ruin_prob(3, 7, Fraction(1, 3)) != Fraction(7, 127):
            mismatches.append("anchor win-prob(3, 7, 1/3) != 7/127")
    if mismatches:
        return CheckResult(
            "oracle-equals-closed-forms",
            False,
            f"{len(mismatches)} of {count} mismatched; first: {mismatches[0]}",
        )
    return CheckResult("oracle-equals-closed-forms", True, f"{count} instances, all exact")


def check_appendix_equality(max_n: int, p_list=DEFAULT_P_LIST) -> CheckResult:
    """Telescoping-difference path agrees exactly with the first-step solves."""
    mismatches = []
    count = 0
    # Fixed checkpoints of the two difference recursions.
    count += 2
    if oracle.square_sum_terms(3)[2] != 14:
        mismatches.append("square-sum term 3 != 14")
    if oracle.geometric_square_terms(Fraction(2), 2)[1] != 11:
        mismatches.append("geometric-square term 2 at odds 2 != 11")
    for p in p_list:
        for n in range(1, max_n + 1):
            for i in range(1, n + 1):
                count += 1
                if oracle.appendix_a_win_duration(i, n, p) != oracle.solve_conditional_win_duration(i, n, p):
                    mismatches.append(f"win-duration tele(i={i}, N={n}, p={p})")
        for m in range(3, max_n + 1):
            count += 1
            if oracle.appendix_b_cover_time(m, p) != oracle.solve_conditional_cover_time(m, p):
                mismatches.append(f"cover-time tele(m={m}, p={p})")
    if mismatches:
        return CheckResult(
            "telescoping-path-equality",
            False,
            f"{len(mismatches)} of {count} mismatched; first: {mismatches[0]}",
        )
    return CheckResult("telescoping-path-equality", True, f"{count} instances, all exact")


def check_rational_pmf_normalization(max_n: int, p_list=DEFAULT_P_LIST) -> CheckResult:
    """Oracle pmf entries sum to exactly one."""
    for p in p_list:
        for m in range(1, max_n + 1):
            total = sum(oracle.solve_last_vertex_pmf(m, p), Fraction(0))
            if total != 1:
                return CheckResult(
                    "rational-pmf-normalization", False, f"sum {total} at m={m}, p={p}"
                )
    return CheckResult(
        "rational-pmf-normalization", True, f"{len(p_list) * max_n} vectors, all exact"
    )


# --------------------------------------------------------------------------
# Float vs oracle fidelity.
# --------------------------------------------------------------------------


def check_float_fidelity(max_n: int, p_list=DEFAULT_P_LIST, tolerance: float = 1e-9) -> CheckResult:
    """Float evaluators match the oracle within ``tolerance`` relative error."""
    worst = _Worst()
    for p in p_list:
        pf = float(p)
        for n in range(1, max_n + 1):
            for i in range(n + 1):
                spec = RuinSpec(i, n, pf)
                worst.update(
                    _rel(formulas.ruin_win_prob(spec), float(oracle.solve_ruin_prob(i, n, p))),
                    f"win-prob(i={i}, N={n}, p={p})",
                )
                worst.update(
                    _rel(formulas.ruin_expected_duration(spec), float(oracle.solve_expected_duration(i, n, p))),
                    f"duration(i={i}, N={n}, p={p})",
                )
                if i >= 1:
                    worst.update(
                        _rel(
                            formulas.conditional_duration_given_win(spec),
                            float(oracle.solve_conditional_win_duration(i, n, p)),
                        ),
                        f"win-duration(i={i}, N={n}, p={p})",
                    )
                if i <= n - 1:
                    worst.update(
                        _rel(
                            formulas.conditional_duration_given_broke(spec),
                            float(oracle.solve_conditional_broke_duration(i, n, p)),
                        ),
                        f"broke-duration(i={i}, N={n}, p={p})",
                    )
                if 1 <= i <= n - 1:
                    worst.update(
                        _rel(
                            formulas.posterior_first_win_given_win(spec),
                            float(oracle.first_win_posterior_exact(i, n, p)),
                        ),
                        f"posterior(i={i}, N={n}, p={p})",
                    )
        for m in range(1, max_n + 1):
            spec = PolygonSpec(m, pf)
            worst.update(
                _rel(
                    formulas.cover_before_return_prob(spec),
                    float(oracle.cover_before_return_prob_exact(m, p)),
                ),
                f"cover-prob(m={m}, p={p})",
            )
            pmf = formulas.last_vertex_pmf(spec)
            cover = [formulas.conditional_cover_time(spec, i) for i in range(1, m + 1)]
            exact_pmf = oracle.solve_last_vertex_pmf(m, p)
            exact_cover = oracle.solve_conditional_cover_time(m, p)
            for i in range(m):
                worst.update(_rel(pmf[i], float(exact_pmf[i])), f"pmf[{i + 1}](m={m}, p={p})")
                worst.update(
                    _rel(cover[i], float(exact_cover[i])), f"cover-time[{i + 1}](m={m}, p={p})"
                )
            worst.update(
                _rel(formulas.expected_cover_time(spec), float(oracle.expected_cover_time_exact(m, p))),
                f"cover-time(m={m}, p={p})",
            )
            worst.update(
                _rel(
                    formulas.expected_return_after_cover(spec),
                    float(oracle.expected_return_after_cover_exact(m, p)),
                ),
                f"return-time(m={m}, p={p})",
            )
    return worst.result("float-matches-oracle", tolerance)


def check_overflow_fidelity(tolerance: float = 1e-6, max_n: int = 200) -> CheckResult:
    """Deep-asymmetry fidelity: the geometric branch at sizes where naive
    powers of the odds ratio would overflow or lose everything."""
    worst = _Worst()
    for p in (Fraction(9, 20), Fraction(11, 20)):
        pf = float(p)
        for n in (max_n // 4, max_n // 2, max_n):
            for i in range(n + 1):
                spec = RuinSpec(i, n, pf)
                worst.update(
                    _rel(formulas.ruin_win_prob(spec), float(oracle.solve_ruin_prob(i, n, p))),
                    f"win-prob(i={i}, N={n}, p={p})",
                )
                worst.update(
                    _rel(
                        formulas.ruin_expected_duration(spec),
                        float(oracle.solve_expected_duration(i, n, p)),
                    ),
                    f"duration(i={i}, N={n}, p={p})",
                )
                if i >= 1:
                    worst.update(
                        _rel(
                            formulas.conditional_duration_given_win(spec),
                            float(oracle.solve_conditional_win_duration(i, n, p)),
                        ),
                        f"win-duration(i={i}, N={n}, p={p})",
                    )
                if i <= n - 1:
                    worst.update(
                        _rel(
                            formulas.conditional_duration_given_broke(spec),
                            float(oracle.solve_conditional_broke_duration(i, n, p)),
                        ),
                        f"broke-duration(i={i}, N={n}, p={p})",
                    )
    return worst.result("deep-asymmetry-fidelity", tolerance)


# --------------------------------------------------------------------------
# Structural identities of the float formulas.
# --------------------------------------------------------------------------


def _ruin_sizes(limit: int) -> list[int]:
    return [n for n in range(2, limit + 1)]


def check_win_prob_swap(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """Swapping win/loss odds mirrors the win probability: P(i) = 1 - P(N-i)."""
    worst = _Worst()
    for n in _ruin_sizes(limit):
        for p in p_grid:
            for i in range(n + 1):
                a = formulas.ruin_win_prob(RuinSpec(i, n, p))
                b = 1.0 - formulas.ruin_win_prob(RuinSpec(n - i, n, 1.0 - p))
                worst.update(abs(a - b), f"(i={i}, N={n}, p={p})")
    return worst.result("win-prob-swap", 1e-12)


def check_duration_swap(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """Swapping odds mirrors the unconditional duration: E(i) = E(N-i)."""
    worst = _Worst()
    for n in _ruin_sizes(limit):
        for p in p_grid:
            for i in range(n + 1):
                a = formulas.ruin_expected_duration(RuinSpec(i, n, p))
                b = formulas.ruin_expected_duration(RuinSpec(n - i, n, 1.0 - p))
                worst.update(_rel(a, b), f"(i={i}, N={n}, p={p})")
    return worst.result("duration-swap", 1e-9)


def check_win_duration_swap_invariance(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """The win-conditioned duration is invariant under swapping the odds."""
    worst = _Worst()
    for n in _ruin_sizes(limit):
        for p in p_grid:
            for i in range(1, n + 1):
                a = formulas.conditional_duration_given_win(RuinSpec(i, n, p))
                b = formulas.conditional_duration_given_win(RuinSpec(i, n, 1.0 - p))
                worst.update(_rel(a, b), f"(i={i}, N={n}, p={p})")
    return worst.result("win-duration-swap-invariance", 1e-9)


def check_broke_is_mirrored_win(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """Ruin-conditioned duration equals the mirrored win-conditioned one."""
    worst = _Worst()
    for n in _ruin_sizes(limit):
        for p in p_grid:
            for i in range(n):
                a = formulas.conditional_duration_given_broke(RuinSpec(i, n, p))
                b = formulas.conditional_duration_given_win(RuinSpec(n - i, n, 1.0 - p))
                worst.update(_rel(a, b), f"(i={i}, N={n}, p={p})")
    return worst.result("broke-duration-mirror", 1e-9)


def check_duration_decomposition(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """E = P*W + (1-P)*B for every interior start."""
    worst = _Worst()
    for n in _ruin_sizes(limit):
        for p in p_grid:
            for i in range(1, n):
                spec = RuinSpec(i, n, p)
                win = formulas.ruin_win_prob(spec)
                mixed = win * formulas.conditional_duration_given_win(spec) + (
                    1.0 - win
                ) * formulas.conditional_duration_given_broke(spec)
                worst.update(
                    _rel(mixed, formulas.ruin_expected_duration(spec)), f"(i={i}, N={n}, p={p})"
                )
    return worst.result("duration-decomposition", 1e-9)


def check_final_fortune_monotone() -> CheckResult:
    """The expected final fortune N*P never grows with the quitting target.

    This holds for fair and unfavorable games (p <= 1/2), where quitting
    immediately is optimal; in a favorable game the expected final fortune
    necessarily rises with the target, so those p are out of scope.
    """
    slack = 1e-12
    for i in (1, 5, 20):
        for p in (0.2, 0.35, 0.45, 0.5):
            values = [
                n * formulas.ruin_win_prob(RuinSpec(i, n, p)) for n in range(i, i + 51)
            ]
            for k in range(len(values) - 1):
                if values[k + 1] > values[k] * (1 + slack) + slack:
                    return CheckResult(
                        "final-fortune-monotone",
                        False,
                        f"increase at i={i}, p={p}, N={i + k} -> {i + k + 1}",
                    )
    return CheckResult("final-fortune-monotone", True, "15 (start, p) series, each non-increasing")


def check_cover_prob_lower_bound(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """Cover-before-return probability is at least 1/m, equality only when fair."""
    for m in range(1, limit + 1):
        for p in p_grid:
            value = formulas.cover_before_return_prob(PolygonSpec(m, p))
            floor = 1 / m
            if value < floor - 1e-12:
                return CheckResult("cover-prob-floor", False, f"below 1/m at m={m}, p={p}")
            if not formulas.is_symmetric(p) and m > 1 and value <= floor:
                return CheckResult(
                    "cover-prob-floor", False, f"no strict excess at m={m}, p={p}"
                )
    return CheckResult("cover-prob-floor", True, f"m <= {limit} over {len(p_grid)} p values")


def check_polygon_swap_family(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """Odds-swap behavior of the polygon laws: cover probability and expected
    cover time are invariant; the pmf and conditional cover times reverse."""
    worst = _Worst()
    for m in range(1, limit + 1):
        for p in p_grid:
            spec = PolygonSpec(m, p)
            swapped = PolygonSpec(m, 1.0 - p)
            worst.update(
                _rel(
                    formulas.cover_before_return_prob(spec),
                    formulas.cover_before_return_prob(swapped),
                ),
                f"cover-prob(m={m}, p={p})",
            )
            worst.update(
                _rel(formulas.expected_cover_time(spec), formulas.expected_cover_time(swapped)),
                f"cover-time(m={m}, p={p})",
            )
            pmf = formulas.last_vertex_pmf(spec)
            pmf_swapped = formulas.last_vertex_pmf(swapped)
            for i in range(1, m + 1):
                worst.update(
                    _rel(pmf[i - 1], pmf_swapped[m - i]), f"pmf[{i}](m={m}, p={p})"
                )
                worst.update(
                    _rel(
                        formulas.conditional_cover_time(spec, i),
                        formulas.conditional_cover_time(swapped, m + 1 - i),
                    ),
                    f"cover-time[{i}](m={m}, p={p})",
                )
    return worst.result("polygon-swap-family", 1e-9)


def check_pmf_normalization(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    worst = _Worst()
    for m in range(1, limit + 1):
        for p in p_grid:
            total = sum(formulas.last_vertex_pmf(PolygonSpec(m, p)))
            worst.update(abs(total - 1.0), f"(m={m}, p={p})")
    return worst.result("pmf-normalization", 1e-12)


def check_weighted_sums(limit: int = IDENTITY_SIZE_LIMIT, p_grid=P_GRID_99) -> CheckResult:
    """Expected cover and return times equal their pmf-weighted sums."""
    worst = _Worst()
    for m in range(1, limit + 1):
        for p in p_grid:
            spec = PolygonSpec(m, p)
            pmf = formulas.last_vertex_pmf(spec)
            cover_mix = sum(
                w * formulas.conditional_cover_time(spec, i)
                for i, w in enumerate(pmf, start=1)
            )
            worst.update(
                _rel(cover_mix, formulas.expected_cover_time(spec)), f"cover(m={m}, p={p})"
            )
            return_mix = sum(
                w * formulas.ruin_expected_duration(RuinSpec(i, m + 1, p))
                for i, w in enumerate(pmf, start=1)
            )
            worst.update(
                _rel(return_mix, formulas.expected_return_after_cover(spec)),
                f"return(m={m}, p={p})",
            )
    return worst.result("weighted-sum-consistency", 1e-9)


def check_continuity_at_fair(tolerance: float = 1e-4) -> CheckResult:
    """Geometric branch evaluated just off p = 1/2 matches the fair branch.

    Instance sizes are chosen so the *true* sensitivity to the 1e-6 probe
    stays inside the tolerance: per-vertex quantities genuinely move by
    about m * 2e-6 relative, so they are probed at m <= 25.
    """
    worst = _Worst()
    offsets = (0.5 - 1e-6, 0.5 + 1e-6)
    ruin_instances = [(1, 2), (3, 7), (10, 20), (20, 40), (20, 50), (32, 64)]
    for i, n in ruin_instances:
        fair = RuinSpec(i, n, 0.5)
        for p in offsets:
            near = RuinSpec(i, n, p)
            worst.update(
                _rel(formulas.ruin_win_prob(near), formulas.ruin_win_prob(fair)),
                f"win-prob(i={i}, N={n})",
            )
            worst.update(
                _rel(
                    formulas.ruin_expected_duration(near),
                    formulas.ruin_expected_duration(fair),
                ),
                f"duration(i={i}, N={n})",
            )
            worst.update(
                _rel(
                    formulas.conditional_duration_given_win(near),
                    formulas.conditional_duration_given_win(fair),
                ),
                f"win-duration(i={i}, N={n})",
            )
            if i <= n - 1:
                worst.update(
                    _rel(
                        formulas.conditional_duration_given_broke(near),
                        formulas.conditional_duration_given_broke(fair),
                    ),
                    f"broke-duration(i={i}, N={n})",
                )
                worst.update(
                    _rel(
                        formulas.posterior_first_win_given_win(near),
                        formulas.posterior_first_win_given_win(fair),
                    ),
                    f"posterior(i={i}, N={n})",
                )
    for m in (1, 2, 3, 5, 10, 25):
        fair = PolygonSpec(m, 0.5)
        for p in offsets:
            near = PolygonSpec(m, p)
            worst.update(
                _rel(
                    formulas.cover_before_return_prob(near),
                    formulas.cover_before_return_prob(fair),
                ),
                f"cover-prob(m={m})",
            )
            worst.update(
                _rel(formulas.expected_cover_time(near), formulas.expected_cover_time(fair)),
                f"cover-time(m={m})",
            )
            worst.update(
                _rel(
                    formulas.expected_return_after_cover(near),
                    formulas.expected_return_after_cover(fair),
                ),
                f"return-time(m={m})",
            )
            pmf_near = formulas.last_vertex_pmf(near)
            pmf_fair = formulas.last_vertex_pmf(fair)
            for i in range(1, m + 1):
                worst.update(_rel(pmf_near[i - 1], pmf_fair[i - 1]), f"pmf[{i}](m={m})")
                worst.update(
                    _rel(
                        formulas.conditional_cover_time(near, i),
                        formulas.conditional_cover_time(fair, i),
                    ),
                    f"cover-time[{i}](m={m})",
                )
    return worst.result("continuity-at-fair", tolerance)


def check_boundary_values() -> CheckResult:
    """Absorbing-boundary values are exact, not merely close."""
    for p in (0.2, 0.5, 0.8):
        for n in (1, 2, 5, 40):
            if formulas.ruin_win_prob(RuinSpec(0, n, p)) != 0.0:
                return CheckResult("boundary-values", False, f"win-prob(0, {n}, {p}) != 0")
            if formulas.ruin_win_prob(RuinSpec(n, n, p)) != 1.0:
                return CheckResult("boundary-values", False, f"win-prob({n}, {n}, {p}) != 1")
            if formulas.ruin_expected_duration(RuinSpec(0, n, p)) != 0.0:
                return CheckResult("boundary-values", False, f"duration(0, {n}, {p}) != 0")
            if formulas.ruin_expected_duration(RuinSpec(n, n, p)) != 0.0:
                return CheckResult("boundary-values", False, f"duration({n}, {n}, {p}) != 0")
            if formulas.conditional_duration_given_win(RuinSpec(n, n, p)) != 0.0:
                return CheckResult("boundary-values", False, f"win-duration({n}, {n}, {p}) != 0")
            if formulas.conditional_duration_given_broke(RuinSpec(0, n, p)) != 0.0:
                return CheckResult("boundary-values", False, f"broke-duration(0, {n}, {p}) != 0")
    return CheckResult("boundary-values", True, "absorbing boundaries exact for all tested p")


def run_verification(max_n: int = 30, p_list=None, identity_limit: int = IDENTITY_SIZE_LIMIT) -> list[CheckResult]:
    """Run the whole suite; ``max_n`` sizes the exact-oracle grid."""
    if p_list is None:
        p_list = DEFAULT_P_LIST
    else:
        p_list = tuple(oracle.as_probability(p) for p in p_list)
    return [
        check_oracle_equality(max_n, p_list),
        check_appendix_equality(max_n, p_list),
        check_rational_pmf_normalization(max_n, p_list),
        check_float_fidelity(max_n, p_list),
        check_overflow_fidelity(),
        check_win_prob_swap(identity_limit),
        check_duration_swap(identity_limit),
        check_win_duration_swap_invariance(identity_limit),
        check_broke_is_mirrored_win(identity_limit),
        check_duration_decomposition(identity_limit),
        check_final_fortune_monotone(),
        check_cover_prob_lower_bound(identity_limit),
        check_polygon_swap_family(identity_limit),
        check_pmf_normalization(identity_limit),
        check_weighted_sums(identity_limit),
        check_continuity_at_fair(),
        check_boundary_values(),
    ]
