"""Command-line front end wiring the library into reproducible experiments.

One subcommand per experiment family:

    simulate  run FTRL against a fixed strategy and emit a trajectory log
    bounds    closed-form exploitation envelopes for a fixed strategy
    trap      alternating-strategy run with its surplus certificate
    sweep     randomized trap sweep over sampled games (CSV)
    pbr       price-of-best-response cost curve (CSV)
    bandit    seeded sampled-play calibration runs (CSV)
    fw        conditional-gradient synthesis of a fixed strategy (JSON)

Exit codes: 0 success, 2 argument errors, 1 event/solver failures.
Identical argv + seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bandit as bandit_mod
from . import dynamics, fixed_analysis, frank_wolfe, pbr, random_suite, trap
from .choicemap import ChoiceMapError
from .game import LPError, ZeroSumGame, load_game, random_game, solve_minimax, gap_profile
from .kernels import kernel_from_selector

__all__ = ["main", "build_parser"]


def _parse_game(spec: str) -> ZeroSumGame:
    if spec.startswith("random:"):
        parts = spec[len("random:") :].split(",")
        if len(parts) != 3:
            raise ValueError("random game spec must be random:<n>,<m>,<seed>")
        n, m, seed = (int(p) for p in parts)
        return random_game(n, m, seed)
    return load_game(spec)


def _parse_x_hat(text: str, n: int) -> np.ndarray:
    vals = np.asarray([float(v) for v in text.split(",")], dtype=float)
    if vals.size != n:
        raise ValueError(f"--x-hat needs {n} comma-separated entries")
    return vals


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftrl-exploit",
        description="Exploitation experiments for FTRL learners in zero-sum games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, kernel=True, eta=False, T=False):
        p.add_argument("--game", required=True, help="path or random:<n>,<m>,<seed>")
        if kernel:
            p.add_argument("--kernel", required=True,
                           help="entropic | euclidean | tsallis:<q>")
        if eta:
            p.add_argument("--eta", type=float, required=True)
        if T:
            p.add_argument("--T", type=int, required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p_sim = sub.add_parser("simulate", help="trajectory log for a fixed strategy")
    add_common(p_sim, eta=True, T=True)
    p_sim.add_argument("--x-hat", default=None,
                       help="comma-separated fixed strategy (default: max-min)")
    p_sim.add_argument("--log-scores", action="store_true")

    p_bounds = sub.add_parser("bounds", help="exploitation envelope table")
    add_common(p_bounds, eta=True, T=True)
    p_bounds.add_argument("--x-hat", default=None)
    p_bounds.add_argument("--br-tol", type=float, default=1e-7)

    p_trap = sub.add_parser("trap", help="alternating trap run + certificate")
    add_common(p_trap, eta=False, T=True)
    p_trap.add_argument("--eta", type=float, default=None)
    p_trap.add_argument("--eta-frac", type=float, default=None,
                        help="fraction of the curvature cap (alternative to --eta)")
    p_trap.add_argument("--delta", type=float, default=0.1)
    p_trap.add_argument("--br-tol", type=float, default=1e-7)
    p_trap.add_argument("--supp-tol", type=float, default=1e-7)

    p_sweep = sub.add_parser("sweep", help="randomized trap sweep (CSV)")
    add_common(p_sweep, T=True)
    p_sweep.add_argument("--eta-frac", type=float, default=0.5)
    p_sweep.add_argument("--delta", type=float, default=0.1)
    p_sweep.add_argument("--trials", type=int, required=True)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_pbr = sub.add_parser("pbr", help="price-of-best-response cost curve (CSV)")
    add_common(p_pbr, eta=False, T=True)
    p_pbr.add_argument("--delta", type=float, default=0.1)
    p_pbr.add_argument("--br-tol", type=float, default=1e-7)

    p_bandit = sub.add_parser("bandit", help="seeded bandit calibration runs (CSV)")
    add_common(p_bandit, eta=True, T=True)
    p_bandit.add_argument("--x-hat", default=None)
    p_bandit.add_argument("--trials", type=int, default=100)
    p_bandit.add_argument("--seed", type=int, default=0)
    p_bandit.add_argument("--delta", type=float, default=0.05)

    p_fw = sub.add_parser("fw", help="Frank-Wolfe strategy synthesis (JSON)")
    add_common(p_fw, eta=True, T=True)
    p_fw.add_argument("--delta", type=float, default=1e-2,
                      help="target reward accuracy driving the iteration budget")
    p_fw.add_argument("--trials", type=int, default=None,
                      help="hard cap on iterations (default: the full budget)")
    return parser


def _cmd_simulate(args) -> int:
    game = _parse_game(args.game)
    kernel = kernel_from_selector(args.kernel)
    sol = solve_minimax(game)
    x = sol.x_star if args.x_hat is None else _parse_x_hat(args.x_hat, game.n)
    traj = dynamics.simulate(game, kernel, args.eta, dynamics.Fixed(x), args.T)
    lines = []
    for t in range(traj.T):
        rec = {
            "t": t,
            "y": traj.strategies[t].tolist(),
            "reward": float(traj.rewards[t]),
            "bregman_increment": float(traj.bregman_increments[t]),
        }
        if args.log_scores:
            rec["score"] = traj.scores[t].tolist()
        lines.append(json.dumps(rec))
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_bounds(args) -> int:
    game = _parse_game(args.game)
    kernel = kernel_from_selector(args.kernel)
    sol = solve_minimax(game)
    x = sol.x_star if args.x_hat is None else _parse_x_hat(args.x_hat, game.n)
    profile = gap_profile(game, x, br_tol=args.br_tol)
    env = fixed_analysis.exploitation_bounds(kernel, profile, args.eta, args.T)
    lo_inf, hi_inf = fixed_analysis.asymptotic_bounds(kernel, profile, args.eta)
    d_lo, d_hi = fixed_analysis.discrete_bounds(kernel, profile, args.eta, args.T)
    lag = dynamics.continuous_lag(game, kernel, args.eta, x, float(args.T))
    fields = {
        "kernel": str(kernel),
        "eta": args.eta,
        "T": args.T,
        "k": profile.k,
        "m": profile.m,
        "delta_min": profile.delta_min,
        "delta_max": profile.delta_max,
        "lag_continuous": lag,
        "lag_lower": env.lag_lower,
        "lag_upper": env.lag_upper,
        "lag_lower_discrete": d_lo,
        "lag_upper_discrete": d_hi,
        "lag_lower_asymptotic": lo_inf,
        "lag_upper_asymptotic": hi_inf,
        "saturation_time": env.saturation_time,
        "regime": env.regime.value,
    }
    if args.format == "csv":
        head = ",".join(fields)
        row = ",".join(str(v) for v in fields.values())
        _write_text(args.out, head + "\n" + row + "\n")
    else:
        # strict JSON has no Infinity literal; steep kernels never saturate
        if math.isinf(fields["saturation_time"]):
            fields["saturation_time"] = None
        _write_text(args.out, json.dumps(fields, sort_keys=True) + "\n")
    return 0


def _cmd_trap(args) -> int:
    game = _parse_game(args.game)
    kernel = kernel_from_selector(args.kernel)
    budget = trap.curvature_budget(kernel, game.n, game.m, args.delta)
    if (args.eta is None) == (args.eta_frac is None):
        raise ValueError("give exactly one of --eta or --eta-frac")
    eta = args.eta if args.eta is not None else args.eta_frac * budget.eta_cap
    sol = solve_minimax(game)
    construction = trap.build_trap(game, sol, br_tol=args.br_tol,
                                   supp_tol=args.supp_tol)
    _, surplus, bound = trap.run_trap(
        game, kernel, eta, args.T, budget, sol=sol, trap=construction
    )
    report = {
        "event_A": construction.event_A_holds,
        "event_gap": construction.event_gap_holds,
        "gap_v_prime": construction.gap_v_prime,
        "eta_cap": budget.eta_cap,
        "M": budget.M,
        "surplus": surplus,
        "certified_bound": bound,
        "T": args.T,
        "eta": eta,
    }
    _write_text(args.out, json.dumps(report, sort_keys=True) + "\n")
    return 0


def _sweep_chunk(params: tuple) -> random_suite.SweepResult:
    n, m, selector, eta_frac, delta, T, lo, hi, seed = params
    return random_suite.trap_sweep_range(
        n, m, kernel_from_selector(selector), eta_frac, delta, T, lo, hi, seed
    )


def _cmd_sweep(args) -> int:
    spec = args.game
    if not spec.startswith("random:"):
        raise ValueError("sweep requires --game random:<n>,<m>,<seed>")
    n, m, seed = (int(p) for p in spec[len("random:") :].split(","))
    if args.jobs <= 1:
        result = random_suite.trap_sweep(
            n, m, kernel_from_selector(args.kernel), args.eta_frac,
            args.delta, args.T, args.trials, seed,
        )
        rows = result.rows
    else:
        bounds_list = np.linspace(0, args.trials, args.jobs + 1, dtype=int)
        params = [
            (n, m, args.kernel, args.eta_frac, args.delta, args.T,
             int(lo), int(hi), seed)
            for lo, hi in zip(bounds_list[:-1], bounds_list[1:])
            if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_sweep_chunk, params))
        rows = [r for c in chunks for r in c.rows]
        rows.sort(key=lambda r: r.trial)
    lines = ["trial,seed,pure_nash,event_A,event_gap,surplus,bound,met"]
    for r in rows:
        surplus = "" if r.surplus is None else repr(r.surplus)
        bound = "" if r.bound is None else repr(r.bound)
        met = "" if r.met is None else int(r.met)
        lines.append(
            f"{r.trial},{r.seed},{int(r.pure_nash)},{int(r.event_A)},"
            f"{int(r.event_gap)},{surplus},{bound},{met}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_pbr(args) -> int:
    game = _parse_game(args.game)
    kernel = kernel_from_selector(args.kernel)
    gammas = list(np.logspace(-4, -1, 13))
    budget = trap.curvature_budget(kernel, game.n, game.m, args.delta)
    eta_grid = list(budget.eta_cap * np.logspace(-2, 0, 10))
    points = pbr.cost_curve(
        game, kernel, gammas, eta_grid, args.T, delta=args.delta, br_tol=args.br_tol
    )
    lines = ["gamma,eta,t,epsilon,exploitation,theorem_lower"]
    for p in points:
        lines.append(
            f"{p.gamma!r},{p.eta!r},{p.t},{p.epsilon_realized!r},"
            f"{p.exploitation!r},{p.theorem_lower!r}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_bandit(args) -> int:
    game = _parse_game(args.game)
    kernel = kernel_from_selector(args.kernel)
    sol = solve_minimax(game)
    x = sol.x_star if args.x_hat is None else _parse_x_hat(args.x_hat, game.n)
    lines = ["seed,T,realized_regret,full_info_regret,margin,violated"]
    margin = bandit_mod.azuma_margin(args.T, game.m, args.delta)
    for s in range(args.trials):
        run = bandit_mod.simulate_bandit(
            game, kernel, args.eta, dynamics.Fixed(x), args.T,
            seed=args.seed + s, delta=args.delta,
        )
        violated = int(run.realized_regret > run.full_info_regret + margin)
        lines.append(
            f"{run.seed},{run.T},{run.realized_regret!r},"
            f"{run.full_info_regret!r},{margin!r},{violated}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_fw(args) -> int:
    game = _parse_game(args.game)
    kernel = kernel_from_selector(args.kernel)
    budget_iters = frank_wolfe.fw_iteration_budget(
        game, kernel, args.eta, args.T, args.delta
    )
    iters = budget_iters if args.trials is None else min(budget_iters, args.trials)
    res = frank_wolfe.fw_optimize(
        game, kernel, args.eta, float(args.T), np.zeros(game.m), iters
    )
    out = {
        "x_hat": res.x_hat.tolist(),
        "iterations": res.iterations,
        "certified_gap_bound": res.certified_gap_bound,
        "reward_estimate": res.reward_estimate,
        "final_fw_gap": res.final_fw_gap,
        "iteration_budget": budget_iters,
    }
    _write_text(args.out, json.dumps(out, sort_keys=True) + "\n")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "bounds": _cmd_bounds,
    "trap": _cmd_trap,
    "sweep": _cmd_sweep,
    "pbr": _cmd_pbr,
    "bandit": _cmd_bandit,
    "fw": _cmd_fw,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (trap.TrapEventError, trap.StepSizeError, pbr.PBRGridError,
            ChoiceMapError, LPError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
