"""Command-line front end: compute, verify, simulate, figure.

Output is machine-oriented and reproducible byte for byte: one JSON record
per line with fixed key order and floats at 17 significant digits, or CSV
for figure tables.  The worker count never appears in output, so runs with
the same seed and parameters compare equal across any parallelism.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

from . import figures, formulas, oracle, simulate, verify
from .types import DomainError, PolygonSpec, RuinSpec

ENV_SEED = "WALK_SEED"

_RUIN_QUANTITIES = ("ruin-prob", "ruin-duration", "win-duration", "broke-duration",
                    "posterior-first-win")
_POLYGON_QUANTITIES = ("cover-prob", "last-vertex-pmf", "cond-cover-time", "cover-time",
                       "return-time", "stationary", "recurrence-time")


# --------------------------------------------------------------------------
# Stable JSON emission.
# --------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        return format(value, ".17g")
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f'{_fmt(str(k))}:{_fmt(v)}' for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _emit(record: dict) -> None:
    sys.stdout.write(_fmt(record) + "\n")


# --------------------------------------------------------------------------
# compute
# --------------------------------------------------------------------------


def _parse_p(text: str) -> tuple[float, Fraction | None]:
    """A probability flag: a float, or an exact 'a/b' ratio (kept for the oracle)."""
    try:
        if "/" in text:
            exact = Fraction(text)
            return float(exact), exact
        return float(text), None
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse probability {text!r}: {exc}") from exc


def _require(args, names: list[str]) -> None:
    missing = [n for n in names if getattr(args, n.strip("-").replace("-", "_"), None) is None]
    if missing:
        raise DomainError(f"missing required flag(s): {', '.join(missing)}")


def cmd_compute(args) -> int:
    quantity = args.quantity
    p_float, p_exact = _parse_p(args.p) if args.p is not None else (None, None)
    if p_float is None:
        raise DomainError("missing required flag(s): --p")

    if quantity in _RUIN_QUANTITIES:
        _require(args, ["--i", "--N"])
        spec = RuinSpec(args.i, args.N, p_float)
        params = {"i": args.i, "N": args.N, "p": p_float}
        closed = {
            "ruin-prob": formulas.ruin_win_prob,
            "ruin-duration": formulas.ruin_expected_duration,
            "win-duration": formulas.conditional_duration_given_win,
            "broke-duration": formulas.conditional_duration_given_broke,
            "posterior-first-win": formulas.posterior_first_win_given_win,
        }[quantity](spec)
        exact = None
        if p_exact is not None:
            exact = str({
                "ruin-prob": lambda: oracle.solve_ruin_prob(args.i, args.N, p_exact),
                "ruin-duration": lambda: oracle.solve_expected_duration(args.i, args.N, p_exact),
                "win-duration": lambda: oracle.solve_conditional_win_duration(args.i, args.N, p_exact),
                "broke-duration": lambda: oracle.solve_conditional_broke_duration(args.i, args.N, p_exact),
                "posterior-first-win": lambda: oracle.first_win_posterior_exact(args.i, args.N, p_exact),
            }[quantity]())
    else:
        _require(args, ["--m"])
        spec = PolygonSpec(args.m, p_float)
        params = {"m": args.m, "p": p_float}
        exact = None
        if quantity == "cond-cover-time":
            _require(args, ["--i"])
            params["i"] = args.i
            closed = formulas.conditional_cover_time(spec, args.i)
            if p_exact is not None:
                exact = str(oracle.solve_conditional_cover_time(args.m, p_exact)[args.i - 1])
        elif quantity == "last-vertex-pmf":
            closed = formulas.last_vertex_pmf(spec)
            if p_exact is not None:
                exact = [str(v) for v in oracle.solve_last_vertex_pmf(args.m, p_exact)]
        elif quantity == "stationary":
            closed = formulas.stationary_distribution(spec)
            exact = [str(Fraction(1, args.m + 1))] * (args.m + 1) if p_exact is not None else None
        elif quantity == "recurrence-time":
            closed = formulas.mean_recurrence_time(spec)
            exact = str(Fraction(args.m + 1)) if p_exact is not None else None
        elif quantity == "cover-prob":
            closed = formulas.cover_before_return_prob(spec)
            if p_exact is not None:
                exact = str(oracle.cover_before_return_prob_exact(args.m, p_exact))
        elif quantity == "cover-time":
            closed = formulas.expected_cover_time(spec)
            if p_exact is not None:
                exact = str(oracle.expected_cover_time_exact(args.m, p_exact))
        else:  # return-time
            closed = formulas.expected_return_after_cover(spec)
            if p_exact is not None:
                exact = str(oracle.expected_return_after_cover_exact(args.m, p_exact))

    record = {"quantity": quantity, "params": params, "closed_form": closed}
    if exact is not None:
        record["oracle"] = exact
    _emit(record)
    return 0


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.max_n < 3:
        print("error: max_n too small (need >= 3)", file=sys.stderr)
        return 2
    p_list = tuple(Fraction(text) for text in args.p) if args.p else None
    results = verify.run_verification(
        max_n=args.max_n, p_list=p_list, identity_limit=args.identity_limit
    )
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.detail}")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------


def _default_seed() -> int:
    env = os.environ.get(ENV_SEED)
    return int(env) if env else simulate.DEFAULT_SEED


def _within_4se(mc: simulate.Estimate, closed: float) -> bool:
    if mc.n == 0 or math.isnan(mc.mean):
        return False
    stderr = 0.0 if math.isnan(mc.stderr) else mc.stderr
    # Degenerate (all-equal) samples report stderr 0; n trials cannot resolve
    # deviations below ~1/n, so that is the comparison floor.  The 1e-12 term
    # absorbs float rounding of the closed form.
    stderr = max(stderr, 1.0 / mc.n)
    return abs(mc.mean - closed) <= 4.0 * stderr + 1e-12 * max(1.0, abs(closed))


def _mc_record(quantity: str, params: dict, closed: float, mc: simulate.Estimate) -> dict:
    return {
        "quantity": quantity,
        "params": params,
        "closed_form": closed,
        "mc_mean": mc.mean,
        "mc_stderr": mc.stderr,
        "mc_n": mc.n,
        "within_4se": _within_4se(mc, closed),
    }


def _warn_truncated(truncated: int, trials: int, max_steps: int) -> None:
    if truncated:
        print(
            f"warning: {truncated} of {trials} trajectories truncated at max_steps={max_steps}",
            file=sys.stderr,
        )


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    p_float, _ = _parse_p(args.p)

    if args.what == "occupancy":
        _require(args, ["--m"])
        spec = PolygonSpec(args.m, p_float)
        config = simulate.SimConfig(trials=1, seed=seed, max_steps=args.max_steps)
        fractions_seen = simulate.simulate_occupancy(spec, args.steps, config)
        params_base = {"m": args.m, "p": p_float, "steps": args.steps, "seed": seed}
        for vertex, fraction in enumerate(fractions_seen):
            record = {
                "quantity": "occupancy",
                "params": {**params_base, "vertex": vertex},
                "closed_form": 1 / (args.m + 1),
                "mc_mean": fraction,
            }
            _emit(record)
        return 0

    config = simulate.SimConfig(
        trials=args.trials, seed=seed, max_steps=args.max_steps, workers=args.workers
    )
    if args.what == "ruin":
        _require(args, ["--i", "--N"])
        spec = RuinSpec(args.i, args.N, p_float)
        result = simulate.simulate_ruin(spec, config)
        _warn_truncated(result.truncated, result.trials, config.max_steps)
        params = {"i": args.i, "N": args.N, "p": p_float, "trials": args.trials,
                  "seed": seed, "max_steps": config.max_steps}
        _emit(_mc_record("ruin-prob", params, formulas.ruin_win_prob(spec), result.win_prob))
        _emit(_mc_record("ruin-duration", params, formulas.ruin_expected_duration(spec),
                         result.duration))
        if spec.start >= 1:
            _emit(_mc_record("win-duration", params,
                             formulas.conditional_duration_given_win(spec),
                             result.duration_given_win))
        if spec.start <= spec.target - 1:
            _emit(_mc_record("broke-duration", params,
                             formulas.conditional_duration_given_broke(spec),
                             result.duration_given_broke))
        if 1 <= spec.start <= spec.target - 1:
            _emit(_mc_record("posterior-first-win", params,
                             formulas.posterior_first_win_given_win(spec),
                             result.first_win_given_win))
        return 0

    _require(args, ["--m"])
    spec = PolygonSpec(args.m, p_float)
    result = simulate.simulate_polygon(spec, config)
    _warn_truncated(result.truncated, result.trials, config.max_steps)
    params = {"m": args.m, "p": p_float, "trials": args.trials, "seed": seed,
              "max_steps": config.max_steps}
    _emit(_mc_record("cover-prob", params, formulas.cover_before_return_prob(spec),
                     result.cover_before_return))
    _emit(_mc_record("cover-time", params, formulas.expected_cover_time(spec),
                     result.cover_time))
    _emit(_mc_record("return-time", params, formulas.expected_return_after_cover(spec),
                     result.return_time))
    pmf = formulas.last_vertex_pmf(spec)
    for vertex in range(1, spec.m + 1):
        _emit(_mc_record("last-vertex-pmf", {**params, "vertex": vertex},
                         pmf[vertex - 1], result.last_vertex_hist[vertex - 1]))
    for vertex in range(1, spec.m + 1):
        _emit(_mc_record("cond-cover-time", {**params, "vertex": vertex},
                         formulas.conditional_cover_time(spec, vertex),
                         result.cover_time_by_last[vertex - 1]))
    return 0


# --------------------------------------------------------------------------
# figure
# --------------------------------------------------------------------------


def cmd_figure(args) -> int:
    if not 1 <= args.id <= 4:
        print(f"error: figure id must be 1..4, got {args.id}", file=sys.stderr)
        return 2
    if args.p_min is None and args.p_max is None and args.p_step is None:
        grid = figures.DEFAULT_P_GRID
    else:
        lo = args.p_min if args.p_min is not None else 0.01
        hi = args.p_max if args.p_max is not None else 0.99
        step = args.p_step if args.p_step is not None else 0.01
        if step <= 0:
            raise DomainError(f"p-step must be positive, got {step}")
        grid = []
        k = 0
        while True:
            p = round(lo + k * step, 12)
            if p > hi + 1e-12:
                break
            grid.append(p)
            k += 1
        grid = tuple(grid)
    request = figures.FigureRequest(args.id, grid)
    try:
        figures.write_figure_csv(request, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


# --------------------------------------------------------------------------
# Parser.
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polywalk",
        description="Gambler's-ruin and polygon cover-walk analytics: "
                    "closed forms, exact oracle, Monte Carlo, figure data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="evaluate one closed-form quantity")
    compute.add_argument("quantity", choices=_RUIN_QUANTITIES + _POLYGON_QUANTITIES)
    compute.add_argument("--i", type=int, help="start fortune / vertex index")
    compute.add_argument("--N", type=int, help="target fortune")
    compute.add_argument("--m", type=int, help="non-origin vertex count")
    compute.add_argument("--p", type=str, help="step probability (float or 'a/b')")
    compute.set_defaults(func=cmd_compute)

    ver = sub.add_parser("verify", help="run the oracle/identity verification suite")
    ver.add_argument("--max-n", type=int, default=30, dest="max_n")
    ver.add_argument("--p", action="append", help="rational probability 'a/b' (repeatable)")
    ver.add_argument("--identity-limit", type=int, default=verify.IDENTITY_SIZE_LIMIT,
                     dest="identity_limit", help="largest N and m for the identity sweeps")
    ver.set_defaults(func=cmd_verify)

    sim = sub.add_parser("simulate", help="Monte Carlo estimates with closed-form cross-check")
    sim.add_argument("what", choices=("ruin", "polygon", "occupancy"))
    sim.add_argument("--i", type=int)
    sim.add_argument("--N", type=int)
    sim.add_argument("--m", type=int)
    sim.add_argument("--p", type=str, required=True)
    sim.add_argument("--trials", type=int, default=100_000)
    sim.add_argument("--steps", type=int, default=1_000_000, help="occupancy walk length")
    sim.add_argument("--seed", type=int, default=None,
                     help=f"defaults to ${ENV_SEED} or {simulate.DEFAULT_SEED}")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--max-steps", type=int, default=simulate.DEFAULT_MAX_STEPS,
                     dest="max_steps")
    sim.set_defaults(func=cmd_simulate)

    fig = sub.add_parser("figure", help="write one figure's data as CSV")
    fig.add_argument("--id", type=int, required=True)
    fig.add_argument("--out", type=str, required=True)
    fig.add_argument("--p-min", type=float, default=None, dest="p_min")
    fig.add_argument("--p-max", type=float, default=None, dest="p_max")
    fig.add_argument("--p-step", type=float, default=None, dest="p_step")
    fig.set_defaults(func=cmd_figure)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
