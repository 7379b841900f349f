"""Simplex-constrained argmax of <z, y> - h(y) for separable regularizers.

The maximizer decouples coordinate-wise through a single normalization
scalar lam: y_i = phi(lam + z_i), with lam the root of
g(lam) = sum_i phi(lam + z_i) = 1.  g is nondecreasing and continuous, so
the root is found by bisection on an analytically valid bracket, followed
by one secant polish.  A batched variant solves many score vectors in one
vectorized sweep; the simulation and trap modules rely on it heavily.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import Kernel

__all__ = [
    "ChoiceResult",
    "ChoiceMapError",
    "solve_choice_map",
    "solve_choice_map_batch",
    "conj_on_simplex",
    "conj_on_simplex_batch",
    "bregman_conj",
]

_RESIDUAL_TOL = 1e-12  # hard failure threshold on |g(lam) - 1| after polish
_MAX_BISECT = 200


class ChoiceMapError(RuntimeError):
    """The normalization root-find failed to converge (kernel bug, not bad input)."""


@dataclass(frozen=True)
class ChoiceResult:
    """Solution of the regularized argmax over the simplex.

    y is the maximizer, lam the KKT normalization scalar, and residual the
    termination value of |sum_i phi(lam + z_i) - 1|.
    """

    y: np.ndarray
    lam: float
    residual: float


def _initial_bracket(kernel: Kernel, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = Z.shape[1]
    tp_low = float(kernel.theta_prime(min(1.0 / m, 1.0)))
    tp_one = float(kernel.theta_prime(1.0))
    # g(lo) <= m * phi(theta'(1/m)) = 1 and g(hi) >= phi(theta'(1)) = 1
    lo = tp_low - Z.max(axis=1)
    hi = tp_one - Z.min(axis=1)
    return lo, hi


def solve_choice_map_batch(
    kernel: Kernel, Z: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solve the choice map for every row of Z.

    Returns (Y, lams, residuals) with Y[t] = phi(lams[t] + Z[t]).
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2:
        raise ValueError("Z must be 2-dimensional (rows are score vectors)")
    if not np.all(np.isfinite(Z)):
        raise ValueError("scores must be finite")
    rows, m = Z.shape
    if m == 1:
        lam = float(kernel.theta_prime(1.0)) - Z[:, 0]
        return np.ones((rows, 1)), lam, np.zeros(rows)

    lo, hi = _initial_bracket(kernel, Z)
    g_lo = kernel.phi(lo[:, None] + Z).sum(axis=1) - 1.0
    g_hi = kernel.phi(hi[:, None] + Z).sum(axis=1) - 1.0
    # the analytic bracket is valid; expand geometrically as a safety net
    width = hi - lo
    for _ in range(60):
        bad_lo = g_lo > 0.0
        bad_hi = g_hi < 0.0
        if not (bad_lo.any() or bad_hi.any()):
            break
        lo = np.where(bad_lo, lo - width, lo)
        hi = np.where(bad_hi, hi + width, hi)
        width = hi - lo
        g_lo = np.where(bad_lo, kernel.phi(lo[:, None] + Z).sum(axis=1) - 1.0, g_lo)
        g_hi = np.where(bad_hi, kernel.phi(hi[:, None] + Z).sum(axis=1) - 1.0, g_hi)

    # Run to bracket collapse rather than stopping at the residual target:
    # clipped coordinates can make g flat at 1 over an interval of lam, and
    # collapsing onto its lower edge maximizes the margin by which non-steep
    # kernels assign exact zeros to eliminated actions.
    mid = 0.5 * (lo + hi)
    g_mid = kernel.phi(mid[:, None] + Z).sum(axis=1) - 1.0
    for _ in range(_MAX_BISECT):
        go_up = g_mid < 0.0
        lo = np.where(go_up, mid, lo)
        g_lo = np.where(go_up, g_mid, g_lo)
        hi = np.where(go_up, hi, mid)
        g_hi = np.where(go_up, g_hi, g_mid)
        new_mid = 0.5 * (lo + hi)
        if np.all(new_mid == mid):  # collapsed to machine precision
            break
        mid = new_mid
        g_mid = kernel.phi(mid[:, None] + Z).sum(axis=1) - 1.0

    # one monotone secant polish on the final bracket
    denom = g_hi - g_lo
    safe = denom > 0.0
    sec = np.where(safe, lo - g_lo * (hi - lo) / np.where(safe, denom, 1.0), mid)
    g_sec = kernel.phi(sec[:, None] + Z).sum(axis=1) - 1.0
    take_sec = np.abs(g_sec) < np.abs(g_mid)
    lam = np.where(take_sec, sec, mid)
    residual = np.abs(np.where(take_sec, g_sec, g_mid))

    if np.max(residual) > _RESIDUAL_TOL:
        worst = int(np.argmax(residual))
        raise ChoiceMapError(
            f"choice map failed to converge: residual={residual[worst]:.3e} "
            f"on row {worst} (kernel {kernel})"
        )
    Y = kernel.phi(lam[:, None] + Z)
    return Y, lam, residual


def solve_choice_map(kernel: Kernel, z: np.ndarray) -> ChoiceResult:
    """Unique maximizer of <z, y> - h(y) over the probability simplex."""
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("z must be a nonempty vector")
    Y, lam, res = solve_choice_map_batch(kernel, z[None, :])
    return ChoiceResult(y=Y[0], lam=float(lam[0]), residual=float(res[0]))


def _h_of(kernel: Kernel, Y: np.ndarray) -> np.ndarray:
    return kernel.theta(Y).sum(axis=-1)


def conj_on_simplex_batch(kernel: Kernel, Z: np.ndarray) -> np.ndarray:
    """h*(z) = <z, Q(z)> - h(Q(z)) for every row of Z."""
    Z = np.asarray(Z, dtype=float)
    Y, _, _ = solve_choice_map_batch(kernel, Z)
    return np.einsum("ij,ij->i", Z, Y) - _h_of(kernel, Y)


def conj_on_simplex(kernel: Kernel, z: np.ndarray) -> float:
    """Fenchel conjugate of the regularizer restricted to the simplex."""
    z = np.asarray(z, dtype=float)
    return float(conj_on_simplex_batch(kernel, z[None, :])[0])


def bregman_conj(kernel: Kernel, z1: np.ndarray, z2: np.ndarray) -> float:
    """Bregman divergence of h* between dual points z1 and z2 (>= 0)."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if z1.shape != z2.shape:
        raise ValueError("z1 and z2 must have the same shape")
    res2 = solve_choice_map(kernel, z2)
    h1 = conj_on_simplex(kernel, z1)
    h2 = float(np.dot(z2, res2.y) - _h_of(kernel, res2.y))
    return h1 - h2 - float(np.dot(res2.y, z1 - z2))
