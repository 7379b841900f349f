"""Bandit-feedback harness: sampled play, realized regret, Azuma margins.

Both players' pure actions are sampled from their mixed strategies each
round; the learner's update itself stays full-information (estimator-based
bandit learners are out of scope).  The harness relates the realized
regret on sampled actions to the full-information regret through the
Azuma-Hoeffding margin and checks the realized-reward sandwich.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import OptimizerSchedule, Trajectory, simulate
from .game import ZeroSumGame, game_rng
from .kernels import Kernel

__all__ = [
    "BanditRun",
    "simulate_bandit",
    "azuma_margin",
    "bandit_reward_sandwich",
]


@dataclass(frozen=True)
class BanditRun:
    """One seeded sampled-play run.

    realized_regret re-evaluates the learner's regret on the sampled pure
    actions; full_info_regret uses the mixed strategies.  feedback records
    which accounting the caller asked for ("full" or "realized"); the
    learner's update is full-information either way.
    """

    sampled_actions: np.ndarray  # (T, 2) int pairs (i_t, j_t)
    realized_payoffs: np.ndarray  # (T,) entries A[i_t, j_t]
    full_info_regret: float
    realized_regret: float
    delta: float
    seed: int
    feedback: str

    @property
    def T(self) -> int:
        return self.realized_payoffs.shape[0]

    @property
    def total_realized(self) -> float:
        return float(self.realized_payoffs.sum())


def _sample_rows(P: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sample one index per row of the stochastic matrix P."""
    cdf = np.cumsum(P, axis=1)
    cdf[:, -1] = 1.0  # guard rounding in the last bin
    return (u[:, None] > cdf).sum(axis=1)


def simulate_bandit(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    sched: OptimizerSchedule,
    T: int,
    seed: int,
    learner_feedback: str = "full",
    delta: float = 0.05,
    traj: Trajectory | None = None,
) -> BanditRun:
    """Run the dynamics, then sample actions i_t ~ x(t), j_t ~ y(t).

    Deterministic for a fixed seed.  Both regret notions are computed from
    their defining sums.  The mixed-strategy trajectory does not depend on
    the sampling seed, so seed sweeps may pass a precomputed `traj`.
    """
    if learner_feedback not in ("full", "realized"):
        raise ValueError("learner_feedback must be 'full' or 'realized'")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if traj is None:
        traj = simulate(game, kernel, eta, sched, T)
    elif traj.T != T:
        raise ValueError("precomputed trajectory does not match the horizon")
    rng = game_rng(seed)
    u = rng.random((2, T))
    i_t = _sample_rows(traj.xs, u[0])
    j_t = _sample_rows(traj.strategies, u[1])
    realized = game.A[i_t, j_t]

    V = traj.xs @ game.A  # row t is x(t)^T A
    full_regret = float(traj.rewards.sum() - V.sum(axis=0).min())
    realized_regret = float(realized.sum() - game.A[i_t, :].sum(axis=0).min())
    return BanditRun(
        sampled_actions=np.stack([i_t, j_t], axis=1),
        realized_payoffs=realized,
        full_info_regret=full_regret,
        realized_regret=realized_regret,
        delta=delta,
        seed=seed,
        feedback=learner_feedback,
    )


def azuma_margin(T: int, m: int, delta: float) -> float:
    """High-probability margin 2 sqrt(2T log(2/delta)) + 2 sqrt(2T log(2m/delta))
    between realized and full-information regret."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return 2.0 * math.sqrt(2.0 * T * math.log(2.0 / delta)) + 2.0 * math.sqrt(
        2.0 * T * math.log(2.0 * m / delta)
    )


def bandit_reward_sandwich(run: BanditRun, v_star: float) -> bool:
    """Check the realized-reward sandwich
    sum_t A[i_t, j_t] <= T V* + full_info_regret + 2 sqrt(2T log(1/delta))."""
    slack = 2.0 * math.sqrt(2.0 * run.T * math.log(1.0 / run.delta))
    return run.total_realized <= run.T * v_star + run.full_info_regret + slack
