"""Discrete-time FTRL trajectories and the reward/exploitation decomposition.

The learner keeps a score S(t+1) = S(t) + B^T x(t) with B = -A and plays
y(t) = Q_h(eta S(t)).  Because every supported optimizer schedule is known
up front, the whole score path is a cumulative sum and all T choice-map
solves run as one batched bisection.

Continuous-time quantities never integrate an ODE: the reward of any
continuous play equals the drop of the potential Phi_eta(Z) = h*(eta Z)/eta
between the endpoint scores, so they are evaluated exactly from two
conjugate values.  The discrete reward exceeds the continuous one by the
sum of Bregman increments of h* along the dual path (the discretization
gap), and the telescoping identity

    total_reward = continuous_reward + discretization_gap

holds to float precision because both sides reuse the same stored scores
and conjugate evaluations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .choicemap import conj_on_simplex, solve_choice_map_batch
from .game import GameSolution, GapProfile, ZeroSumGame
from .kernels import Kernel, regularizer_range

__all__ = [
    "Fixed",
    "MaxMin",
    "Alternating",
    "FrankWolfeFixed",
    "Explicit",
    "schedule_matrix",
    "Trajectory",
    "ExploitationReport",
    "simulate",
    "potential",
    "reward_report",
    "continuous_lag",
    "dg_envelope",
    "reward_sandwich_check",
    "pointwise_bound_violation",
    "write_trajectory_log",
]

_SIMPLEX_TOL = 1e-10


def _check_simplex(x: np.ndarray, n: int, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"{what} must have length {n}")
    if abs(x.sum() - 1.0) > _SIMPLEX_TOL or x.min() < -_SIMPLEX_TOL:
        raise ValueError(f"{what} must lie on the {n}-simplex")
    return x


@dataclass(frozen=True)
class Fixed:
    """Play the same mixed strategy every round."""

    x: np.ndarray


@dataclass(frozen=True)
class MaxMin:
    """Play the max-min strategy of a solved game every round."""

    solution: GameSolution


@dataclass(frozen=True)
class Alternating:
    """Alternate x_even / x_odd; optionally play `final` in the last round
    when the horizon is odd (keeps the time-average at the midpoint)."""

    x_even: np.ndarray
    x_odd: np.ndarray
    final: np.ndarray | None = None


@dataclass(frozen=True)
class FrankWolfeFixed:
    """Fixed strategy produced by the conditional-gradient optimizer."""

    x: np.ndarray


@dataclass(frozen=True)
class Explicit:
    """Arbitrary list of per-round strategies; must cover the horizon."""

    xs: np.ndarray


OptimizerSchedule = Fixed | MaxMin | Alternating | FrankWolfeFixed | Explicit


def schedule_matrix(sched: OptimizerSchedule, T: int, n: int) -> np.ndarray:
    """Materialize a schedule as a (T, n) array of simplex rows."""
    if T < 1:
        raise ValueError("horizon T must be >= 1")
    if isinstance(sched, (Fixed, FrankWolfeFixed)):
        x = _check_simplex(sched.x, n, "fixed strategy")
        return np.tile(x, (T, 1))
    if isinstance(sched, MaxMin):
        x = _check_simplex(sched.solution.x_star, n, "max-min strategy")
        return np.tile(x, (T, 1))
    if isinstance(sched, Alternating):
        xe = _check_simplex(sched.x_even, n, "even-round strategy")
        xo = _check_simplex(sched.x_odd, n, "odd-round strategy")
        X = np.empty((T, n))
        X[0::2] = xe
        X[1::2] = xo
        if sched.final is not None and T % 2 == 1:
            X[T - 1] = _check_simplex(sched.final, n, "final-round strategy")
        return X
    if isinstance(sched, Explicit):
        xs = np.asarray(sched.xs, dtype=float)
        if xs.ndim != 2 or xs.shape[0] < T or xs.shape[1] != n:
            raise ValueError("explicit schedule does not cover the horizon")
        X = xs[:T].copy()
        for t in range(T):
            _check_simplex(X[t], n, f"explicit strategy at t={t}")
        return X
    raise TypeError(f"unknown schedule type: {type(sched).__name__}")


@dataclass(frozen=True)
class Trajectory:
    """Time-indexed record of one simulated FTRL run.

    scores has T+1 rows (S(0) = 0 first); strategies, rewards, xs and
    bregman_increments have T rows.  conj_values caches h*(eta S(t)) for
    t = 0..T so reports can telescope on exactly the stored numbers.
    """

    eta: float
    xs: np.ndarray
    scores: np.ndarray
    strategies: np.ndarray
    rewards: np.ndarray
    bregman_increments: np.ndarray
    conj_values: np.ndarray
    kernel: Kernel

    @property
    def T(self) -> int:
        return self.rewards.shape[0]

    @property
    def total_reward(self) -> float:
        return float(self.rewards.sum())

    @property
    def continuous_reward(self) -> float:
        return float((self.conj_values[0] - self.conj_values[-1]) / self.eta)

    @property
    def discretization_gap(self) -> float:
        return float(self.bregman_increments.sum())


def simulate(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    sched: OptimizerSchedule,
    T: int,
) -> Trajectory:
    """Run T rounds of FTRL against the given optimizer schedule."""
    if eta <= 0:
        raise ValueError("step size eta must be positive")
    X = schedule_matrix(sched, T, game.n)
    XA = X @ game.A  # row t is x(t)^T A, i.e. -B^T x(t)
    increments = -XA  # B^T x(t)
    S = np.zeros((T + 1, game.m))
    np.cumsum(increments, axis=0, out=S[1:])
    Z = eta * S

    Y, _, _ = solve_choice_map_batch(kernel, Z)
    conj = np.einsum("ij,ij->i", Z, Y) - kernel.theta(Y).sum(axis=1)
    strategies = Y[:T]
    rewards = np.einsum("ti,ti->t", XA, strategies)
    # D_{h*}(z_{t+1}, z_t) with grad h*(z_t) = y(t), on the stored values
    inner = np.einsum("ti,ti->t", strategies, Z[1:] - Z[:T])
    breg = (conj[1:] - conj[:T] - inner) / eta
    return Trajectory(
        eta=eta,
        xs=X,
        scores=S,
        strategies=strategies,
        rewards=rewards,
        bregman_increments=breg,
        conj_values=conj,
        kernel=kernel,
    )


def potential(kernel: Kernel, eta: float, Z: np.ndarray) -> float:
    """Learner potential Phi_eta(Z) = h*(eta Z) / eta."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    Z = np.asarray(Z, dtype=float)
    return conj_on_simplex(kernel, eta * Z) / eta


@dataclass(frozen=True)
class ExploitationReport:
    """Reward decomposition of one run, with the fixed-strategy VAG/LAG split
    when a gap profile is supplied."""

    total_reward: float
    continuous_reward: float
    discretization_gap: float
    value_term: float
    exploitation_discrete: float
    exploitation_continuous: float
    vag: float | None = None
    lag_discrete: float | None = None
    lag_continuous: float | None = None


def reward_report(
    traj: Trajectory,
    game: ZeroSumGame,
    sol: GameSolution,
    profile: GapProfile | None = None,
) -> ExploitationReport:
    T = traj.T
    total = traj.total_reward
    cont = traj.continuous_reward
    dg = traj.discretization_gap
    value_term = T * sol.value
    exp_d = total - value_term
    exp_c = cont - value_term
    vag = lag_d = lag_c = None
    if profile is not None:
        vag = T * (profile.v_star - sol.value)
        lag_d = exp_d - vag
        lag_c = exp_c - vag
    return ExploitationReport(
        total_reward=total,
        continuous_reward=cont,
        discretization_gap=dg,
        value_term=value_term,
        exploitation_discrete=exp_d,
        exploitation_continuous=exp_c,
        vag=vag,
        lag_discrete=lag_d,
        lag_continuous=lag_c,
    )


def continuous_lag(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    x_hat: np.ndarray,
    T_real: float,
) -> float:
    """Continuous-time LAG of a fixed strategy, exactly via the potential drop.

    LAG(T) = [Phi_eta(0) - Phi_eta(T B^T x_hat)] - T min_i (A^T x_hat)_i.
    No quadrature is involved; the test suite cross-checks against an
    adaptive-Simpson oracle.
    """
    if T_real < 0:
        raise ValueError("T_real must be nonnegative")
    x_hat = _check_simplex(x_hat, game.n, "x_hat")
    v = game.A.T @ x_hat
    if T_real == 0:
        return 0.0
    drop = potential(kernel, eta, np.zeros(game.m)) - potential(kernel, eta, -T_real * v)
    return float(drop - T_real * v.min())


def dg_envelope(traj: Trajectory, game: ZeroSumGame) -> float:
    """Upper bound (eta / 2 alpha) sum_t ||A^T x(t)||_*^2 on the discretization gap."""
    geo = traj.kernel.geometry
    dual = geo.norm_profile.dual_norm(traj.xs @ game.A)
    return float(traj.eta / (2.0 * geo.strong_convexity_alpha) * np.sum(dual**2))


def reward_sandwich_check(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    T: float,
    fw_iters: int = 200,
) -> tuple[float, float, float]:
    """(T V*, best continuous-reward estimate, T V* + (h_max - h_min)/eta).

    The estimate maximizes the potential drop over the Frank-Wolfe iterate
    and the max-min strategy, so it always sits inside the sandwich (up to
    1e-6), which is asserted before returning.
    """
    from .frank_wolfe import fw_optimize
    from .game import solve_minimax

    if eta <= 0 or T <= 0:
        raise ValueError("eta and T must be positive")
    sol = solve_minimax(game)
    lower = T * sol.value
    h_min, h_max = regularizer_range(kernel, game.m)
    upper = lower + (h_max - h_min) / eta

    res = fw_optimize(game, kernel, eta, T, np.zeros(game.m), fw_iters)
    phi0 = potential(kernel, eta, np.zeros(game.m))
    at_star = phi0 - potential(kernel, eta, T * (-(game.A.T @ sol.x_star)))
    estimate = max(res.reward_estimate, at_star)
    if not (lower - 1e-6 <= estimate <= upper + 1e-6):
        raise AssertionError(
            f"reward sandwich violated: {lower} <= {estimate} <= {upper}"
        )
    return lower, float(estimate), float(upper)


def pointwise_bound_violation(
    traj: Trajectory, profile: GapProfile, slack: float = 1e-10
) -> float:
    """Worst violation of the per-coordinate FTRL bounds along a fixed-x run.

    At each integer t, best-response coordinates share one value
    a_t in [1/m, 1/k] and each suboptimal coordinate j lies in
    [phi(theta'(1/m) - eta t delta_j), phi(theta'(1/k) - eta t delta_j)].
    Returns the largest violation (<= slack means the run conforms).
    """
    k = traj.kernel
    m = profile.m
    br = profile.br_set
    out = np.setdiff1d(np.arange(m), br)
    T = traj.T
    t = np.arange(T, dtype=float)
    Y = traj.strategies
    worst = 0.0

    a = Y[:, br]
    worst = max(worst, float(np.max(a.max(axis=1) - a.min(axis=1))))
    worst = max(worst, float(np.max(1.0 / m - a.min(axis=1))))
    worst = max(worst, float(np.max(a.max(axis=1) - 1.0 / profile.k)))

    if out.size:
        tp_m = float(k.theta_prime(1.0 / m))
        tp_k = float(k.theta_prime(1.0 / profile.k))
        deltas = profile.gaps[out]
        low = k.phi(tp_m - traj.eta * np.outer(t, deltas))
        high = k.phi(tp_k - traj.eta * np.outer(t, deltas))
        worst = max(worst, float(np.max(low - Y[:, out])))
        worst = max(worst, float(np.max(Y[:, out] - high)))
    return worst


def write_trajectory_log(
    traj: Trajectory, path: str | Path, log_scores: bool = False
) -> None:
    """Newline-delimited per-round records: t, y, reward, bregman_increment
    (+ score behind the --log-scores flag)."""
    with open(path, "w") as fh:
        for t in range(traj.T):
            rec = {
                "t": t,
                "y": traj.strategies[t].tolist(),
                "reward": float(traj.rewards[t]),
                "bregman_increment": float(traj.bregman_increments[t]),
            }
            if log_scores:
                rec["score"] = traj.scores[t].tolist()
            fh.write(json.dumps(rec) + "\n")
