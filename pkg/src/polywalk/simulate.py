"""Seeded, reproducible Monte Carlo estimation of every walk quantity.

Trials are embarrassingly parallel: trial ``t`` owns the counter-based
substream keyed by ``(seed, t)`` (see :mod:`polywalk._rng`), workers fill
disjoint slices of shared outcome arrays, and all statistics are reduced
from the completed arrays.  Results are therefore bit-identical for any
worker count and for either kernel backend.

Trajectories that hit the per-trajectory step cap are counted and excluded
from every estimate; they are never silently dropped.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels_py
from ._rng import MASK64
from .types import DomainError, PolygonSpec, RuinSpec

try:  # compiled kernels are optional; the pure-Python ones are always there
    from . import _kernels as _backend

    KERNEL_BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    _backend = _kernels_py
    KERNEL_BACKEND = "python"

DEFAULT_SEED = 42
DEFAULT_MAX_STEPS = 10_000_000


def kernel_backend() -> str:
    """Which kernel implementation this process is using."""
    return KERNEL_BACKEND


@dataclass(frozen=True)
class SimConfig:
    """Execution parameters for a simulation run.

    ``workers`` only changes how trials are scheduled, never the result.
    """

    trials: int
    seed: int = DEFAULT_SEED
    max_steps: int = DEFAULT_MAX_STEPS
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo point estimate: mean, standard error, sample size.

    ``stderr`` is the sample standard deviation over sqrt(n); it is NaN
    when fewer than two observations contribute.
    """

    mean: float
    stderr: float
    n: int


@dataclass(frozen=True)
class RuinOutcome:
    """One simulated ruin game."""

    won: bool
    duration: int
    first_bet_won: bool


@dataclass(frozen=True)
class CoverOutcome:
    """One simulated polygon walk, summarized."""

    cover_time: int
    last_vertex: int
    return_time: int
    covered_before_return: bool


@dataclass(frozen=True)
class RuinSimResult:
    win_prob: Estimate
    duration: Estimate
    duration_given_win: Estimate
    duration_given_broke: Estimate
    first_win_given_win: Estimate
    trials: int
    truncated: int


@dataclass(frozen=True)
class PolygonSimResult:
    cover_before_return: Estimate
    last_vertex_hist: tuple[Estimate, ...]
    cover_time: Estimate
    cover_time_by_last: tuple[Estimate, ...]
    return_time: Estimate
    trials: int
    truncated: int


def _estimate(values: np.ndarray) -> Estimate:
    n = int(values.size)
    if n == 0:
        return Estimate(math.nan, math.nan, 0)
    mean = int(values.sum(dtype=np.int64)) / n  # exact integer sum
    if n == 1:
        return Estimate(mean, math.nan, 1)
    dev = values.astype(np.float64) - mean
    var = float(np.sum(dev * dev)) / (n - 1)
    return Estimate(mean, math.sqrt(var / n), n)


def _run_sharded(fill, pre_args: tuple, out_arrays: tuple, trials: int, workers: int) -> None:
    workers = max(1, min(workers, trials))
    if workers == 1:
        fill(*pre_args, 0, trials, *out_arrays)
        return
    bounds = [trials * w // workers for w in range(workers + 1)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(fill, *pre_args, bounds[w], bounds[w + 1], *out_arrays)
            for w in range(workers)
        ]
        for future in futures:
            future.result()


def simulate_ruin(spec: RuinSpec, config: SimConfig) -> RuinSimResult:
    """Estimate all five ruin quantities from ``config.trials`` games."""
    trials = config.trials
    duration = np.empty(trials, dtype=np.int64)
    won = np.empty(trials, dtype=np.int8)
    first = np.empty(trials, dtype=np.int8)
    trunc = np.empty(trials, dtype=np.int8)
    _run_sharded(
        _backend.ruin_fill,
        (spec.start, spec.target, float(spec.p), config.seed & MASK64, ),
        (config.max_steps, duration, won, first, trunc),
        trials,
        config.workers,
    )
    ok = trunc == 0
    won_ok = ok & (won == 1)
    broke_ok = ok & (won == 0)
    return RuinSimResult(
        win_prob=_estimate(won[ok]),
        duration=_estimate(duration[ok]),
        duration_given_win=_estimate(duration[won_ok]),
        duration_given_broke=_estimate(duration[broke_ok]),
        first_win_given_win=_estimate(first[won_ok]),
        trials=trials,
        truncated=int(trials - np.count_nonzero(ok)),
    )


def simulate_polygon(spec: PolygonSpec, config: SimConfig) -> PolygonSimResult:
    """Estimate cover/return quantities from ``config.trials`` polygon walks."""
    trials = config.trials
    cover = np.empty(trials, dtype=np.int64)
    last = np.empty(trials, dtype=np.int64)
    ret = np.empty(trials, dtype=np.int64)
    covered = np.empty(trials, dtype=np.int8)
    trunc = np.empty(trials, dtype=np.int8)
    _run_sharded(
        _backend.polygon_fill,
        (spec.m, float(spec.p), config.seed & MASK64),
        (config.max_steps, cover, last, ret, covered, trunc),
        trials,
        config.workers,
    )
    ok = trunc == 0
    hist = []
    by_last = []
    for v in range(1, spec.m + 1):
        hist.append(_estimate((last[ok] == v).astype(np.int8)))
        by_last.append(_estimate(cover[ok & (last == v)]))
    return PolygonSimResult(
        cover_before_return=_estimate(covered[ok]),
        last_vertex_hist=tuple(hist),
        cover_time=_estimate(cover[ok]),
        cover_time_by_last=tuple(by_last),
        return_time=_estimate(ret[ok]),
        trials=trials,
        truncated=int(trials - np.count_nonzero(ok)),
    )


def simulate_occupancy(spec: PolygonSpec, steps: int, config: SimConfig) -> list[float]:
    """Fraction of steps entering each vertex over one walk of ``steps`` steps.

    A single trajectory is inherently serial, so ``config.workers`` is
    ignored; the walk consumes the substream of trial index 0.
    """
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    counts = np.zeros(spec.m + 1, dtype=np.int64)
    _backend.occupancy_fill(spec.m, float(spec.p), config.seed & MASK64, steps, counts)
    return [int(c) / steps for c in counts]


def ruin_outcome(spec: RuinSpec, seed: int = DEFAULT_SEED, trial: int = 0,
                 max_steps: int = DEFAULT_MAX_STEPS) -> RuinOutcome:
    """Replay a single ruin trajectory (for audits and tests)."""
    size = trial + 1
    duration = np.zeros(size, dtype=np.int64)
    won = np.zeros(size, dtype=np.int8)
    first = np.zeros(size, dtype=np.int8)
    trunc = np.zeros(size, dtype=np.int8)
    _kernels_py.ruin_fill(
        spec.start, spec.target, float(spec.p), seed & MASK64, trial, size, max_steps,
        duration, won, first, trunc,
    )
    if trunc[trial]:
        raise RuntimeError(f"trajectory truncated at max_steps={max_steps}")
    return RuinOutcome(bool(won[trial]), int(duration[trial]), bool(first[trial]))


def polygon_outcome(spec: PolygonSpec, seed: int = DEFAULT_SEED, trial: int = 0,
                    max_steps: int = DEFAULT_MAX_STEPS) -> CoverOutcome:
    """Replay a single polygon trajectory (for audits and tests)."""
    size = trial + 1
    cover = np.zeros(size, dtype=np.int64)
    last = np.zeros(size, dtype=np.int64)
    ret = np.zeros(size, dtype=np.int64)
    covered = np.zeros(size, dtype=np.int8)
    trunc = np.zeros(size, dtype=np.int8)
    _kernels_py.polygon_fill(
        spec.m, float(spec.p), seed & MASK64, trial, size, max_steps,
        cover, last, ret, covered, trunc,
    )
    if trunc[trial]:
        raise RuntimeError(f"trajectory truncated at max_steps={max_steps}")
    return CoverOutcome(
        int(cover[trial]), int(last[trial]), int(ret[trial]), bool(covered[trial])
    )
