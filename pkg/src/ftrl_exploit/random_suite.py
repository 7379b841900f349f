"""Monte-Carlo verification of the random-game events and batch trap runs.

Trials draw i.i.d. Unif[-1, 1] payoff matrices from per-trial Philox
substreams (seed, trial index), so sweeps are reproducible under any
execution order and parallelize without coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .game import has_pure_nash, random_game, row_gap_min, solve_minimax
from .kernels import Kernel
from .trap import TrapEventError, build_trap, curvature_budget, run_trap

__all__ = [
    "SweepResult",
    "TrialRecord",
    "pure_nash_probability",
    "estimate_event_rates",
    "trap_sweep",
    "trap_sweep_range",
]


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    pure_nash: bool
    event_A: bool
    event_gap: bool
    surplus: float | None = None
    bound: float | None = None
    met: bool | None = None


@dataclass
class SweepResult:
    """Counters and per-trial rows from one randomized sweep."""

    trials: int
    successes: dict[str, int]
    seeds: list[int]
    rows: list[TrialRecord] = field(default_factory=list)
    mean_surplus: float | None = None
    mean_bound: float | None = None

    def rate(self, key: str) -> float:
        if self.trials == 0:
            return 0.0
        return self.successes.get(key, 0) / self.trials


def pure_nash_probability(n: int, m: int) -> float:
    """Probability n! m! / (n + m - 1)! that an i.i.d.-continuous game has a
    pure saddle point; evaluated through log-factorials for large sizes."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return math.exp(math.lgamma(n + 1) + math.lgamma(m + 1) - math.lgamma(n + m))


def _trial_seed(seed: int, trial: int) -> int:
    import numpy as np

    return int(np.random.SeedSequence(seed, spawn_key=(trial,)).generate_state(1)[0])


def estimate_event_rates(n: int, m: int, trials: int, seed: int) -> SweepResult:
    """Sample games and count the pure-saddle, row-gap, and trap events.

    The trap event is recorded as "a trap construction exists for the LP's
    max-min strategy", i.e. solve_minimax + build_trap succeed.
    """
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    counts = {"pure_nash": 0, "event_A": 0, "event_gap": 0}
    rows: list[TrialRecord] = []
    seeds: list[int] = []
    gamma = 2.0 / (n**2 * m**3)
    for t in range(trials):
        g = random_game(n, m, seed, trial=t)
        pn = has_pure_nash(g)
        gap_ok = m >= 2 and row_gap_min(g) >= gamma
        try:
            sol = solve_minimax(g)
            build_trap(g, sol)
            ev_a = True
        except TrapEventError:
            ev_a = False
        counts["pure_nash"] += pn
        counts["event_A"] += ev_a
        counts["event_gap"] += gap_ok
        ts = _trial_seed(seed, t)
        seeds.append(ts)
        rows.append(TrialRecord(t, ts, pn, ev_a, gap_ok))
    return SweepResult(trials=trials, successes=counts, seeds=seeds, rows=rows)


def trap_sweep(
    n: int,
    m: int,
    kernel: Kernel,
    eta_fraction: float,
    delta: float,
    T: int,
    trials: int,
    seed: int,
) -> SweepResult:
    """Run the trap on sampled games and check the surplus certificate.

    Games without a qualifying construction count as event_A failures, not
    surplus failures.  The certificate check is pathwise: every
    event-holding run must individually satisfy surplus >= bound - 1e-8.
    """
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    return trap_sweep_range(n, m, kernel, eta_fraction, delta, T, 0, trials, seed)


def trap_sweep_range(
    n: int,
    m: int,
    kernel: Kernel,
    eta_fraction: float,
    delta: float,
    T: int,
    lo: int,
    hi: int,
    seed: int,
) -> SweepResult:
    """Sweep over the trial indices [lo, hi); merging ranges is associative,
    so parallel workers can split the index space arbitrarily."""
    if not 0.0 < eta_fraction <= 1.0:
        raise ValueError("eta_fraction must lie in (0, 1]")
    budget = curvature_budget(kernel, n, m, delta)
    eta = eta_fraction * budget.eta_cap
    counts = {"pure_nash": 0, "event_A": 0, "event_gap": 0, "surplus_met": 0}
    rows: list[TrialRecord] = []
    seeds: list[int] = []
    surpluses: list[float] = []
    bounds: list[float] = []
    gamma = 2.0 / (n**2 * m**3)
    for t in range(lo, hi):
        g = random_game(n, m, seed, trial=t)
        pn = has_pure_nash(g)
        gap_ok = m >= 2 and row_gap_min(g) >= gamma
        counts["pure_nash"] += pn
        counts["event_gap"] += gap_ok
        ts = _trial_seed(seed, t)
        seeds.append(ts)
        try:
            sol = solve_minimax(g)
            trap = build_trap(g, sol)
        except TrapEventError:
            rows.append(TrialRecord(t, ts, pn, False, gap_ok))
            continue
        counts["event_A"] += 1
        _, surplus, bound = run_trap(
            g, kernel, eta, T, budget, sol=sol, trap=trap, certify=False
        )
        met = surplus >= bound - 1e-8
        counts["surplus_met"] += met
        surpluses.append(surplus)
        bounds.append(bound)
        rows.append(TrialRecord(t, ts, pn, True, gap_ok, surplus, bound, met))
    result = SweepResult(trials=hi - lo, successes=counts, seeds=seeds, rows=rows)
    if surpluses:
        result.mean_surplus = sum(surpluses) / len(surpluses)
        result.mean_bound = sum(bounds) / len(bounds)
    return result
