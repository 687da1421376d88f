"""Figure data: the curves behind the four standard plots, as CSV.

Each figure is a family of curves over a probability grid:

1. win probability from a start of 20 for targets 25, 40, 50, 100;
2. win-/unconditional/ruin-conditioned durations from 20 for targets 50, 25;
3. cover-before-return probability for m = 10, 20, 25, 40, 50;
4. expected cover time for m = 50, 40, 25, 20, 10.

Column order matches the top-to-bottom curve order of the plots at the
fair point.  Output is plain CSV (header row, LF endings, floats at 17
significant digits) so any plotting tool can consume it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formulas
from .types import DomainError, PolygonSpec, RuinSpec

DEFAULT_P_GRID = tuple(k / 100 for k in range(1, 100))

_FIG1_TARGETS = (25, 40, 50, 100)
_FIG3_SIZES = (10, 20, 25, 40, 50)
_FIG4_SIZES = (50, 40, 25, 20, 10)


def _fig1_headers() -> list[str]:
    return [f"win_prob_i20_N{n}" for n in _FIG1_TARGETS]


def _fig1_row(p: float) -> list[float]:
    return [formulas.ruin_win_prob(RuinSpec(20, n, p)) for n in _FIG1_TARGETS]


def _fig2_headers() -> list[str]:
    return [
        "dur_given_win_i20_N50",
        "dur_i20_N50",
        "dur_given_broke_i20_N50",
        "dur_given_broke_i20_N25",
        "dur_i20_N25",
        "dur_given_win_i20_N25",
    ]


def _fig2_row(p: float) -> list[float]:
    long_game = RuinSpec(20, 50, p)
    short_game = RuinSpec(20, 25, p)
    return [
        formulas.conditional_duration_given_win(long_game),
        formulas.ruin_expected_duration(long_game),
        formulas.conditional_duration_given_broke(long_game),
        formulas.conditional_duration_given_broke(short_game),
        formulas.ruin_expected_duration(short_game),
        formulas.conditional_duration_given_win(short_game),
    ]


def _fig3_headers() -> list[str]:
    return [f"cover_prob_m{m}" for m in _FIG3_SIZES]


def _fig3_row(p: float) -> list[float]:
    return [formulas.cover_before_return_prob(PolygonSpec(m, p)) for m in _FIG3_SIZES]


def _fig4_headers() -> list[str]:
    return [f"cover_time_m{m}" for m in _FIG4_SIZES]


def _fig4_row(p: float) -> list[float]:
    return [formulas.expected_cover_time(PolygonSpec(m, p)) for m in _FIG4_SIZES]


_FIGURES = {
    1: (_fig1_headers, _fig1_row),
    2: (_fig2_headers, _fig2_row),
    3: (_fig3_headers, _fig3_row),
    4: (_fig4_headers, _fig4_row),
}


@dataclass(frozen=True)
class FigureRequest:
    """Which figure to tabulate and over which probability grid."""

    figure_id: int
    p_grid: tuple[float, ...] = field(default=DEFAULT_P_GRID)

    def __post_init__(self) -> None:
        if self.figure_id not in _FIGURES:
            raise DomainError(f"figure_id must be 1..4, got {self.figure_id}")
        if len(self.p_grid) == 0:
            raise DomainError("p_grid must be non-empty")
        previous = 0.0
        for p in self.p_grid:
            if not 0.0 < p < 1.0:
                raise DomainError(f"grid values must lie strictly inside (0, 1), got {p}")
            if p <= previous:
                raise DomainError("grid must be strictly increasing")
            previous = p


def figure_headers(figure_id: int) -> list[str]:
    return ["p"] + _FIGURES[figure_id][0]()


def figure_rows(request: FigureRequest) -> list[list[float]]:
    row_fn = _FIGURES[request.figure_id][1]
    return [[p, *row_fn(p)] for p in request.p_grid]


def write_figure_csv(request: FigureRequest, path: str) -> None:
    """Write one figure's table; floats at 17 significant digits, LF endings."""
    lines = [",".join(figure_headers(request.figure_id))]
    for row in figure_rows(request):
        lines.append(",".join(format(value, ".17g") for value in row))
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
