"""Price-of-best-response cost curves: exploitation vs. learning accuracy.

Under the horizon-adapted alternating schedule the learner's score at
every measured time t equals -t A^T x*, so its l1 distance to the uniform
best-response point is a pure function of (eta, t).  The cost curve scans
an (eta, t) grid for the cheapest cumulative exploitation that still
reaches each accuracy target gamma, and pairs it with the closed-form
lower-bound expression

    (C / (2 delta_min)) [theta'((1 - gamma/2)/k) - theta'(gamma/(2(m-k)))].

Steep kernels make the second term diverge as gamma -> 0 (unbounded
tuition); non-steep kernels saturate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .choicemap import solve_choice_map_batch
from .dynamics import Alternating, simulate
from .game import GameSolution, ZeroSumGame, gap_profile, solve_minimax
from .kernels import Kernel
from .trap import TrapConstruction, build_trap, curvature_budget

__all__ = [
    "CostCurvePoint",
    "PBRGridError",
    "theorem_lower_formula",
    "cost_curve",
]


class PBRGridError(ValueError):
    """No grid point reaches the requested accuracy."""


@dataclass(frozen=True)
class CostCurvePoint:
    gamma: float
    epsilon_realized: float
    exploitation: float
    theorem_lower: float
    eta: float
    t: int


def theorem_lower_formula(
    kernel: Kernel, gamma: float, k: int, m: int, delta_min: float, C: float
) -> float:
    """Closed-form accuracy cost; domain 0 < gamma < 2 (m - k), k < m.

    The first theta' argument is clamped into (0, 1] so the formula stays
    defined up to the boundary of the gamma range.
    """
    if k >= m:
        raise ValueError("the formula needs at least one suboptimal action (k < m)")
    if not 0.0 < gamma < 2.0 * (m - k):
        raise ValueError("gamma must lie in (0, 2(m - k))")
    hi_arg = min(max((1.0 - gamma / 2.0) / k, 1e-300), 1.0)
    lo_arg = gamma / (2.0 * (m - k))
    return (
        C
        / (2.0 * delta_min)
        * (float(kernel.theta_prime(hi_arg)) - float(kernel.theta_prime(min(lo_arg, 1.0))))
    )


def _exploitations(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    trap: TrapConstruction,
    value: float,
    T_max: int,
) -> np.ndarray:
    """Cumulative exploitation at every horizon t = 0..T_max under the
    t-adapted alternating schedule (pairs, plus x* in the last round when t
    is odd)."""
    sched = Alternating(trap.x_prime, trap.x_double)  # pure alternation
    traj = simulate(game, kernel, eta, sched, T_max)
    cum = np.concatenate([[0.0], np.cumsum(traj.rewards)])
    t = np.arange(T_max + 1, dtype=float)
    expl = cum - t * value
    # odd horizons replace the last round with x*, whose reward is
    # <x*, A y(t-1)> with y(t-1) taken at the even prefix index
    odd = np.arange(1, T_max + 1, 2)
    star_rewards = traj.strategies[odd - 1] @ (game.A.T @ trap.x_star)
    expl[odd] = cum[odd - 1] + star_rewards - odd * value
    return expl


def cost_curve(
    game: ZeroSumGame,
    kernel: Kernel,
    gammas: list[float],
    eta_grid: list[float],
    T_max: int,
    delta: float = 0.1,
    sol: GameSolution | None = None,
    br_tol: float = 1e-7,
) -> list[CostCurvePoint]:
    """Minimal exploitation achieving each accuracy target.

    For every eta the alternating run is simulated once; accuracies
    eps(eta, t) = ||Q_h(-eta t A^T x*) - unif(br)||_1 and exploitations are
    then read off for every t <= T_max, and the minimum over the whole
    (eta, t) grid with eps <= gamma is reported per gamma.
    """
    if not gammas or not eta_grid or T_max < 2:
        raise PBRGridError("empty gamma/eta grid or horizon too short")
    if sol is None:
        sol = solve_minimax(game)
    trap = build_trap(game, sol, br_tol=br_tol)  # raises on event failure
    profile = gap_profile(game, sol.x_star, br_tol=br_tol)
    m, k = profile.m, profile.k
    if k >= m or profile.delta_min is None:
        raise PBRGridError("no suboptimal actions: the cost curve is trivial")
    for gamma in gammas:
        if not 0.0 < gamma < 2.0 * (m - k):
            raise ValueError(f"gamma={gamma} outside (0, {2.0 * (m - k)})")

    budget = curvature_budget(kernel, game.n, game.m, delta)
    C = trap.gap_v_prime**2 / (4.0 * budget.M)

    y_ref = np.zeros(m)
    y_ref[profile.br_set] = 1.0 / k
    t_axis = np.arange(T_max + 1, dtype=float)

    eps_by_eta: dict[float, np.ndarray] = {}
    expl_by_eta: dict[float, np.ndarray] = {}
    for eta in eta_grid:
        Z = -eta * np.outer(t_axis, profile.v)
        Y, _, _ = solve_choice_map_batch(kernel, Z)
        eps_by_eta[eta] = np.abs(Y - y_ref).sum(axis=1)
        expl_by_eta[eta] = _exploitations(game, kernel, eta, trap, sol.value, T_max)

    points: list[CostCurvePoint] = []
    for gamma in gammas:
        best: tuple[float, float, int, float] | None = None  # (expl, eta, t, eps)
        for eta in eta_grid:
            eps = eps_by_eta[eta]
            ok = np.flatnonzero(eps[2:] <= gamma) + 2  # horizons t >= 2
            if ok.size == 0:
                continue
            cand = expl_by_eta[eta][ok]
            pick = int(np.argmin(cand))
            t_pick = int(ok[pick])
            if best is None or cand[pick] < best[0]:
                best = (float(cand[pick]), eta, t_pick, float(eps[t_pick]))
        if best is None:
            raise PBRGridError(f"no (eta, t) grid point reaches accuracy {gamma}")
        expl, eta, t, eps_val = best
        points.append(
            CostCurvePoint(
                gamma=float(gamma),
                epsilon_realized=eps_val,
                exploitation=expl,
                theorem_lower=float(
                    theorem_lower_formula(kernel, gamma, k, m, profile.delta_min, C)
                ),
                eta=float(eta),
                t=t,
            )
        )
    return points
