"""Conditional-gradient synthesis of near-optimal fixed optimizer strategies.

Path independence makes the continuous-time reward a function of the
time-average strategy alone, so the optimal continuous reward is
Phi_eta(S0) - min_x G(x) with G(x) = Phi_eta(S0 + T B^T x), a smooth convex
program over the n-simplex.  G is beta-smooth with
beta = (eta T ||A||_op)^2 / alpha -- the horizon enters squared, which is
what drives the iteration budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .choicemap import solve_choice_map_batch
from .game import ZeroSumGame
from .kernels import Kernel, NormProfile

__all__ = [
    "FWResult",
    "PowerIterationError",
    "operator_norm",
    "fw_optimize",
    "fw_iteration_budget",
    "estimate_curvature",
]


class PowerIterationError(RuntimeError):
    """Power iteration failed to stabilize the spectral norm."""


@dataclass(frozen=True)
class FWResult:
    """Output of the conditional-gradient run.

    certified_gap_bound, final_fw_gap and objective_values are all in the
    units of the smooth objective G(x) = h*(eta (S0 + T B^T x)); divide by
    eta to convert an objective gap into a reward gap.  reward_estimate is
    already in reward units.
    """

    x_hat: np.ndarray
    iterations: int
    certified_gap_bound: float  # 2 R^2 beta / (iterations + 1)
    reward_estimate: float  # Phi_eta(S0) - G(x_hat) / eta
    final_fw_gap: float  # <grad G(x), x - v> at the returned iterate
    objective_values: np.ndarray  # G at each visited iterate


def operator_norm(game: ZeroSumGame, norm_profile: NormProfile) -> float:
    """||A||_op = max_x ||A^T x||_* / ||x|| under the given pairing.

    (l1, linf): the max is attained at a vertex, giving max_ij |A_ij|.
    (l2, l2): largest singular value, by power iteration to 1e-8.
    """
    A = game.A
    if norm_profile is NormProfile.L1_WITH_LINF_DUAL:
        return float(np.max(np.abs(A)))
    M = A @ A.T if game.n <= game.m else A.T @ A
    v = np.ones(M.shape[0]) / math.sqrt(M.shape[0])
    v[0] += 1e-3  # break symmetry against unlucky orthogonal starts
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(10_000):
        w = M @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        new_sigma = math.sqrt(float(v @ (M @ v)))
        if abs(new_sigma - sigma) <= 1e-8 * max(1.0, new_sigma):
            return new_sigma
        sigma = new_sigma
    raise PowerIterationError("power iteration did not converge in 10^4 steps")


def _smoothness(game: ZeroSumGame, kernel: Kernel, eta: float, T: float) -> float:
    geo = kernel.geometry
    op = operator_norm(game, geo.norm_profile)
    return (eta * T * op) ** 2 / geo.strong_convexity_alpha


def fw_optimize(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    T: float,
    S0: np.ndarray,
    iters: int,
) -> FWResult:
    """Minimize G(x) = Phi_eta(S0 + T B^T x) by Frank-Wolfe with step 2/(s+2).

    The gradient is T B Q_h(eta (S0 + T B^T x)); the linear minimization
    oracle picks the simplex vertex with the smallest gradient coordinate
    (lowest index on ties).  No line search: the 2 R^2 beta / (k+1)
    certificate is stated for this step rule.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if eta <= 0 or T <= 0:
        raise ValueError("eta and T must be positive")
    S0 = np.asarray(S0, dtype=float)
    if S0.shape != (game.m,):
        raise ValueError("S0 must have length m")
    A = game.A
    n = game.n

    def eval_point(x: np.ndarray) -> tuple[float, np.ndarray]:
        """(G(x), grad G(x)) from a single choice-map solve.

        The reward-units gradient is T B Q_h(z); G carries an extra eta, so
        its gradient does too.  Only the direction matters to the LMO.
        """
        z = eta * (S0 + T * (-(A.T @ x)))
        Y, _, _ = solve_choice_map_batch(kernel, z[None, :])
        y = Y[0]
        g_val = float(z @ y) - float(kernel.theta(y).sum())
        grad = -eta * T * (A @ y)  # eta T B @ y
        return g_val, grad

    x = np.full(n, 1.0 / n)
    obj = np.empty(iters + 1)
    for s in range(iters):
        g_val, grad = eval_point(x)
        obj[s] = g_val
        v_idx = int(np.argmin(grad))
        gamma = 2.0 / (s + 2.0)
        x = (1.0 - gamma) * x
        x[v_idx] += gamma
    g_final, grad = eval_point(x)
    obj[iters] = g_final
    v_idx = int(np.argmin(grad))
    fw_gap = float(grad @ x - grad[v_idx])

    beta = _smoothness(game, kernel, eta, T)
    R = kernel.geometry.norm_profile.simplex_diameter()
    certified = 2.0 * R * R * beta / (iters + 1.0)
    phi0 = _conj(kernel, eta * S0) / eta
    reward_estimate = phi0 - g_final / eta
    return FWResult(
        x_hat=x,
        iterations=iters,
        certified_gap_bound=certified,
        reward_estimate=float(reward_estimate),
        final_fw_gap=fw_gap,
        objective_values=obj,
    )


def _conj(kernel: Kernel, z: np.ndarray) -> float:
    Y, _, _ = solve_choice_map_batch(kernel, z[None, :])
    return float(z @ Y[0]) - float(kernel.theta(Y[0]).sum())


def fw_iteration_budget(
    game: ZeroSumGame, kernel: Kernel, eta: float, T: float, eps: float
) -> int:
    """Iterations guaranteeing an eps-accurate reward:
    ceil(2 R^2 eta T^2 ||A||_op^2 / (alpha eps))."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    geo = kernel.geometry
    op = operator_norm(game, geo.norm_profile)
    R = geo.norm_profile.simplex_diameter()
    return int(math.ceil(2.0 * R * R * eta * T * T * op * op
                         / (geo.strong_convexity_alpha * eps)))


def estimate_curvature(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    T: float,
    S0: np.ndarray,
    pairs: int,
    seed: int,
) -> float:
    """Empirical smoothness of G along random simplex segments:
    max ||grad G(x1) - grad G(x2)||_* / ||x1 - x2|| in the kernel's pairing."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    A = game.A
    n = game.n
    profile = kernel.geometry.norm_profile
    S0 = np.asarray(S0, dtype=float)

    def grad_at(X: np.ndarray) -> np.ndarray:
        Z = eta * (S0[None, :] + T * (-(X @ A)))
        Y, _, _ = solve_choice_map_batch(kernel, Z)
        return -eta * T * (Y @ A.T)

    X1 = rng.dirichlet(np.ones(n), size=pairs)
    X2 = rng.dirichlet(np.ones(n), size=pairs)
    G1 = grad_at(X1)
    G2 = grad_at(X2)
    num = profile.dual_norm(G1 - G2)
    den = profile.primal_norm(X1 - X2)
    ok = den > 1e-12
    return float(np.max(num[ok] / den[ok]))
