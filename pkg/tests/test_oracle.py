"""Exact rational oracle: frozen values, path agreement, solver plumbing."""

from fractions import Fraction

import pytest

from polywalk import oracle
from polywalk.oracle import DenominatorLimitError, FirstStepSystem
from polywalk.types import DomainError

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


class TestAsProbability:
    def test_accepts_fraction_and_string(self):
        assert oracle.as_probability(Fraction(2, 3)) == Fraction(2, 3)
        assert oracle.as_probability("2/3") == Fraction(2, 3)

    def test_rejects_floats_and_out_of_range(self):
        with pytest.raises(DomainError):
            oracle.as_probability(0.3)
        with pytest.raises(DomainError):
            oracle.as_probability(Fraction(1))
        with pytest.raises(DomainError):
            oracle.as_probability("7/5")


class TestFirstStepSystem:
    def test_weight_validation(self):
        with pytest.raises(DomainError):
            FirstStepSystem(
                down=(Fraction(1, 3),),
                up=(Fraction(1, 3),),
                rhs=(Fraction(0),),
                left=Fraction(0),
                right=Fraction(1),
            )

    def test_denominator_guard_trips(self):
        n = 12
        system = FirstStepSystem(
            down=(Fraction(2, 3),) * n,
            up=(Fraction(1, 3),) * n,
            rhs=(Fraction(1),) * n,
            left=Fraction(0),
            right=Fraction(0),
        )
        with pytest.raises(DenominatorLimitError):
            system.solve(max_denominator_bits=4)
        # generous limit: same system solves fine
        assert len(system.solve()) == n


class TestRuinSolves:
    def test_single_bet(self):
        assert oracle.solve_ruin_prob(1, 2, Fraction(2, 3)) == Fraction(2, 3)

    def test_fair_midpoint(self):
        assert oracle.solve_ruin_prob(20, 40, HALF) == HALF

    def test_geometric_anchor(self):
        assert oracle.solve_ruin_prob(3, 7, THIRD) == Fraction(7, 127)

    def test_duration_values(self):
        assert oracle.solve_expected_duration(1, 2, Fraction(4, 7)) == 1
        assert oracle.solve_expected_duration(20, 40, HALF) == 400
        assert oracle.solve_expected_duration(2, 4, THIRD) == Fraction(18, 5)

    def test_win_duration_values(self):
        assert oracle.solve_conditional_win_duration(1, 2, Fraction(1, 5)) == 1
        assert oracle.solve_conditional_win_duration(20, 50, HALF) == 700
        assert oracle.solve_conditional_win_duration(2, 4, THIRD) == Fraction(18, 5)

    def test_broke_duration_values(self):
        assert oracle.solve_conditional_broke_duration(1, 2, Fraction(1, 5)) == 1
        assert oracle.solve_conditional_broke_duration(20, 25, HALF) == 200
        # mirror identity by construction
        assert oracle.solve_conditional_broke_duration(2, 4, Fraction(2, 3)) == (
            oracle.solve_conditional_win_duration(2, 4, THIRD)
        )

    def test_bounds(self):
        with pytest.raises(DomainError):
            oracle.solve_ruin_prob(5, 4, HALF)
        with pytest.raises(DomainError):
            oracle.solve_conditional_win_duration(0, 4, HALF)
        with pytest.raises(DomainError):
            oracle.solve_conditional_broke_duration(4, 4, HALF)
        assert oracle.solve_conditional_win_duration(4, 4, HALF) == 0
        assert oracle.solve_conditional_broke_duration(0, 4, HALF) == 0


class TestPolygonSolves:
    def test_pmf_values(self):
        assert oracle.solve_last_vertex_pmf(1, Fraction(3, 7)) == [1]
        assert oracle.solve_last_vertex_pmf(5, HALF) == [Fraction(1, 5)] * 5
        assert oracle.solve_last_vertex_pmf(2, Fraction(2, 3)) == [THIRD, Fraction(2, 3)]
        # odds ratio 2: masses proportional to 2**(m-i)
        assert oracle.solve_last_vertex_pmf(3, THIRD) == [
            Fraction(4, 7),
            Fraction(2, 7),
            Fraction(1, 7),
        ]

    @pytest.mark.parametrize("m", [1, 2, 3, 7, 12])
    @pytest.mark.parametrize("p", [Fraction(1, 5), HALF, Fraction(7, 9)])
    def test_pmf_sums_to_exactly_one(self, m, p):
        assert sum(oracle.solve_last_vertex_pmf(m, p), Fraction(0)) == 1

    def test_cover_time_values(self):
        assert oracle.solve_conditional_cover_time(1, Fraction(9, 11)) == [1]
        assert oracle.solve_conditional_cover_time(3, HALF) == [
            Fraction(17, 3),
            Fraction(20, 3),
            Fraction(17, 3),
        ]
        assert oracle.solve_conditional_cover_time(4, THIRD) == [
            Fraction(1103, 155),
            Fraction(1418, 155),
            Fraction(1583, 155),
            Fraction(1448, 155),
        ]

    def test_triangle_boundary_construction(self):
        # m = 2: one step plus a plain ruin game on the cut-open cycle
        p = Fraction(2, 3)
        v = oracle.solve_conditional_cover_time(2, p)
        assert v == [
            1 + oracle.solve_expected_duration(1, 3, p),
            1 + oracle.solve_expected_duration(2, 3, p),
        ]

    def test_composites(self):
        assert oracle.cover_before_return_prob_exact(2, Fraction(2, 3)) == Fraction(5, 9)
        assert oracle.cover_before_return_prob_exact(1, Fraction(1, 4)) == 1
        assert oracle.expected_cover_time_exact(3, THIRD) == Fraction(187, 35)
        assert oracle.expected_return_after_cover_exact(3, Fraction(2, 3)) == Fraction(97, 35)
        assert oracle.expected_return_after_cover_exact(2, HALF) == 2

    def test_posterior(self):
        assert oracle.first_win_posterior_exact(1, 6, Fraction(2, 7)) == 1
        assert oracle.first_win_posterior_exact(2, 5, THIRD) == Fraction(7, 9)
        assert oracle.first_win_posterior_exact(2, 9, HALF) == Fraction(3, 4)


class TestClosedFormAgreement:
    """Closed forms in rationals equal the first-step solves, fraction for fraction."""

    @pytest.mark.parametrize("p", [Fraction(1, 5), THIRD, HALF, Fraction(2, 3), Fraction(4, 5)])
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 9, 14])
    def test_ruin_family(self, n, p):
        for i in range(n + 1):
            assert oracle.solve_ruin_prob(i, n, p) == oracle.closed_ruin_win_prob(i, n, p)
            assert oracle.solve_expected_duration(i, n, p) == (
                oracle.closed_ruin_expected_duration(i, n, p)
            )
            if i >= 1:
                assert oracle.solve_conditional_win_duration(i, n, p) == (
                    oracle.closed_conditional_win_duration(i, n, p)
                )
            if i <= n - 1:
                assert oracle.solve_conditional_broke_duration(i, n, p) == (
                    oracle.closed_conditional_broke_duration(i, n, p)
                )
            if 1 <= i <= n - 1:
                assert oracle.first_win_posterior_exact(i, n, p) == (
                    oracle.closed_first_win_posterior(i, n, p)
                )

    @pytest.mark.parametrize("p", [Fraction(1, 5), THIRD, HALF, Fraction(2, 3), Fraction(4, 5)])
    @pytest.mark.parametrize("m", [1, 2, 3, 4, 8, 13])
    def test_polygon_family(self, m, p):
        assert oracle.solve_last_vertex_pmf(m, p) == oracle.closed_last_vertex_pmf(m, p)
        assert oracle.solve_conditional_cover_time(m, p) == (
            oracle.closed_conditional_cover_time(m, p)
        )
        assert oracle.cover_before_return_prob_exact(m, p) == (
            oracle.closed_cover_before_return_prob(m, p)
        )
        assert oracle.expected_cover_time_exact(m, p) == oracle.closed_expected_cover_time(m, p)
        assert oracle.expected_return_after_cover_exact(m, p) == (
            oracle.closed_expected_return_after_cover(m, p)
        )


class TestTelescopingPath:
    def test_square_sum_checkpoint(self):
        assert oracle.square_sum_terms(3) == [1, 5, 14]

    def test_geometric_square_checkpoint(self):
        # odds ratio 2: second term is 2*1 + (1 + 2)**2
        assert oracle.geometric_square_terms(Fraction(2), 2) == [1, 11]

    @pytest.mark.parametrize("r", [Fraction(2), HALF, Fraction(3, 5)])
    def test_geometric_terms_match_their_closed_form(self, r):
        terms = oracle.geometric_square_terms(r, 30)
        for i, term in enumerate(terms, start=1):
            closed = (
                r ** (2 * i + 1) - (2 * i + 1) * r ** (i + 1) + (2 * i + 1) * r**i - 1
            ) / (r - 1) ** 3
            assert term == closed

    def test_symmetric_scaled_differences_are_square_sums(self):
        n = 12
        wins = [oracle.solve_conditional_win_duration(j, n, HALF) for j in range(1, n + 1)]
        sums = oracle.square_sum_terms(n - 1)
        for j in range(1, n):
            assert Fraction(j * (j + 1), 2) * (wins[j - 1] - wins[j]) == sums[j - 1]

    @pytest.mark.parametrize("p", [Fraction(1, 5), THIRD, HALF, Fraction(2, 3)])
    @pytest.mark.parametrize("n", [1, 2, 5, 11, 20])
    def test_win_duration_path_equality(self, n, p):
        for i in range(1, n + 1):
            assert oracle.appendix_a_win_duration(i, n, p) == (
                oracle.solve_conditional_win_duration(i, n, p)
            )

    def test_win_duration_symmetric_anchor(self):
        assert oracle.appendix_a_win_duration(20, 50, HALF) == 700

    @pytest.mark.parametrize("p", [Fraction(1, 5), THIRD, HALF, Fraction(2, 3)])
    @pytest.mark.parametrize("m", [3, 4, 7, 15])
    def test_cover_time_path_equality(self, m, p):
        assert oracle.appendix_b_cover_time(m, p) == oracle.solve_conditional_cover_time(m, p)

    def test_symmetric_cover_diff_seed(self):
        assert oracle.cover_time_diff_terms(5, HALF)[0] == 3

    def test_cover_path_needs_m_at_least_three(self):
        with pytest.raises(DomainError):
            oracle.appendix_b_cover_time(2, HALF)

    def test_trace_bundle(self):
        trace = oracle.recurrence_trace(5, THIRD)
        assert trace.square_sums == (1, 5, 14, 30, 55)
        assert len(trace.geometric_square_sums) == 5
        assert len(trace.cover_diffs) == 4
        small = oracle.recurrence_trace(2, THIRD)
        assert small.cover_diffs == ()
