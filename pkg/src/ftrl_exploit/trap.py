"""The alternating "trap" strategy: construction, certificates, diagnostics.

Against a max-min strategy whose best-response set contains two actions
that some supported row can tell apart, the optimizer can alternate two
perturbations x' and x'' that average back to the max-min strategy while
flipping the learner's preferred action every round.  Each two-round block
then pays at least 2 V* plus a positive surplus proportional to eta and to
the squared payoff separation of the flipped pair, divided by the kernel
curvature along the learner's interpolation path.

Event bookkeeping is honest: a game where no qualifying construction
exists raises TrapEventError instead of fabricating one, and the recorded
event flags state exactly what held for the solved max-min strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .choicemap import solve_choice_map_batch
from .dynamics import Alternating, Trajectory, simulate
from .game import GameSolution, ZeroSumGame, gap_profile, row_gap_min
from .kernels import Kernel

__all__ = [
    "TrapConstruction",
    "CurvatureBudget",
    "TrapEventError",
    "StepSizeError",
    "VarianceCheck",
    "build_trap",
    "curvature_budget",
    "run_trap",
    "variance_identity_check",
    "path_mass_check",
    "interpolation_states",
]

_DISTINGUISH_TOL = 1e-12


class TrapEventError(RuntimeError):
    """No qualifying (i, j, l) triple: the game sits outside the trap event."""


class StepSizeError(ValueError):
    """Step size above the curvature budget's cap."""


@dataclass(frozen=True)
class TrapConstruction:
    """The tuple realizing the alternating strategy.

    i and j are distinct best responses to x_star ordered so that
    A[ell, i] > A[ell, j]; ell carries the most mass among the support of
    x_star (lowest index on ties).  gamma is the anti-degeneracy threshold
    2 / (n^2 m^3) that the row-gap event is certified against.
    """

    x_star: np.ndarray
    i: int
    j: int
    ell: int
    x_prime: np.ndarray
    x_double: np.ndarray
    v_prime: np.ndarray
    v: np.ndarray
    event_A_holds: bool
    event_gap_holds: bool
    gamma: float
    event_A_witness: tuple[int, int, int] | None  # (ell, i, j) certifying event A
    row_gap_observed: float

    @property
    def gap_v_prime(self) -> float:
        """Realized payoff separation v'_i - v'_j of the flipped pair."""
        return float(self.v_prime[self.i] - self.v_prime[self.j])


@dataclass(frozen=True)
class CurvatureBudget:
    """Step-size and curvature constants for a trap run at interior margin delta."""

    delta: float
    M: float  # sup of theta'' on [delta, 1 - delta]
    eta_cap: float
    C: float  # worst-case per-round surplus constant 1 / (2 M (n m)^6)
    n: int
    m: int


def build_trap(
    game: ZeroSumGame,
    sol: GameSolution,
    br_tol: float = 1e-7,
    supp_tol: float = 1e-7,
) -> TrapConstruction:
    """Construct the alternating pair for the solved max-min strategy.

    Requires at least two best responses and a supported row that tells a
    pair of them apart; the pair with the widest separation on the chosen
    row wins, ties to lowest indices, and (i, j) are swapped so that
    A[ell, i] > A[ell, j].
    """
    A = game.A
    n, m = game.n, game.m
    x_star = sol.x_star
    profile = gap_profile(game, x_star, br_tol=br_tol)
    br = profile.br_set
    supp = np.flatnonzero(x_star > supp_tol)
    gamma = 2.0 / (n**2 * m**3)
    observed_gap = row_gap_min(game) if m >= 2 else 0.0
    event_gap = bool(m >= 2 and observed_gap >= gamma)

    witness = None
    if br.size >= 2:
        for ell_c in supp:
            sub = A[ell_c, br]
            hi, lo = int(np.argmax(sub)), int(np.argmin(sub))
            if sub[hi] - sub[lo] > _DISTINGUISH_TOL:
                witness = (int(ell_c), int(br[hi]), int(br[lo]))
                break
    event_A = witness is not None

    if br.size < 2:
        raise TrapEventError(
            f"only {br.size} best response(s) to the max-min strategy; "
            "the trap needs two distinguishable ones"
        )

    # the row with the most max-min mass, lowest index on ties (LP output
    # can split exact ties by an ulp, so ties are read with a tolerance)
    masses = np.where(x_star > supp_tol, x_star, -np.inf)
    ell = int(np.flatnonzero(masses >= masses.max() - 1e-9)[0])

    pairs = [(a, b) for ai, a in enumerate(br) for b in br[ai + 1 :]]
    seps = np.array([abs(A[ell, a] - A[ell, b]) for a, b in pairs])
    best = int(np.flatnonzero(seps >= seps.max() - 1e-12)[0])
    if seps[best] <= _DISTINGUISH_TOL:
        raise TrapEventError(
            "no pair of best responses is distinguishable on the max-mass "
            f"support row {ell}"
        )
    i, j = pairs[best]
    if A[ell, i] < A[ell, j]:
        i, j = j, i

    w = float(x_star[ell])
    x_prime = (1.0 - w) * x_star + w * np.eye(n)[ell]
    x_double = (1.0 + w) * x_star - w * np.eye(n)[ell]
    return TrapConstruction(
        x_star=x_star,
        i=int(i),
        j=int(j),
        ell=ell,
        x_prime=x_prime,
        x_double=x_double,
        v_prime=A.T @ x_prime,
        v=A.T @ x_star,
        event_A_holds=event_A,
        event_gap_holds=event_gap,
        gamma=gamma,
        event_A_witness=witness,
        row_gap_observed=float(observed_gap),
    )


def curvature_budget(kernel: Kernel, n: int, m: int, delta: float) -> CurvatureBudget:
    """Curvature bound M on [delta, 1 - delta] and the step-size cap
    eta <= alpha / (c_norm sup||u||_*) (1/m - delta)."""
    if not 0.0 < delta < 1.0 / m:
        raise ValueError("delta must lie in (0, 1/m)")
    geo = kernel.geometry
    M = kernel.curvature_max(delta, 1.0 - delta)
    cap = (
        geo.strong_convexity_alpha
        / (geo.norm_profile.c_norm * geo.norm_profile.dual_ball_radius(m))
        * (1.0 / m - delta)
    )
    C = 1.0 / (2.0 * M * (n * m) ** 6)
    return CurvatureBudget(delta=delta, M=M, eta_cap=cap, C=C, n=n, m=m)


def run_trap(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    T: int,
    budget: CurvatureBudget,
    sol: GameSolution | None = None,
    trap: TrapConstruction | None = None,
    certify: bool = True,
) -> tuple[Trajectory, float, float]:
    """Simulate the alternating schedule and certify the realized surplus.

    The schedule plays x' on even rounds, x'' on odd rounds, and the
    max-min strategy in the last round when T is odd.  Returns
    (trajectory, surplus, certified bound) where

        surplus = total_reward - T V*
        bound   = eta (T - 1) (v'_i - v'_j)^2 / (4 M),

    the pathwise per-pair guarantee summed over the floor(T/2) pairs.  When
    both events held the surplus is asserted to clear the bound.
    """
    from .game import solve_minimax

    if T < 2:
        raise ValueError("trap runs need T >= 2")
    if eta > budget.eta_cap + 1e-12:
        raise StepSizeError(
            f"eta={eta} exceeds the curvature budget cap {budget.eta_cap}"
        )
    if sol is None:
        sol = solve_minimax(game)
    if trap is None:
        trap = build_trap(game, sol)
    sched = Alternating(trap.x_prime, trap.x_double, final=trap.x_star)
    traj = simulate(game, kernel, eta, sched, T)
    surplus = traj.total_reward - T * sol.value
    bound = eta * (T - 1) * trap.gap_v_prime**2 / (4.0 * budget.M)
    if (
        certify
        and trap.event_A_holds
        and trap.event_gap_holds
        and surplus < bound - 1e-8
    ):
        raise AssertionError(
            f"trap surplus {surplus} fell below its certificate {bound}"
        )
    return traj, float(surplus), float(bound)


def interpolation_states(
    kernel: Kernel, eta: float, trap: TrapConstruction, s: int, r: np.ndarray
) -> np.ndarray:
    """Learner states y(r) = Q_h(-2 eta s v - r eta v') for r in [0, 1]."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    Z = -2.0 * eta * s * trap.v[None, :] - np.outer(r, eta * trap.v_prime)
    Y, _, _ = solve_choice_map_batch(kernel, Z)
    return Y


@dataclass(frozen=True)
class VarianceCheck:
    max_abs_error: float
    skipped_r: list[float]
    min_two_point_margin: float  # min over grid of W Var - (v'_i - v'_j)^2/(th''_i + th''_j)


def variance_identity_check(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    trap: TrapConstruction,
    s: int,
    grid: int,
    fd_step: float = 1e-6,
    supp_eps: float = 1e-12,
) -> VarianceCheck:
    """Finite-difference audit of the interpolation derivative.

    At each of `grid` interior points r, the central difference of
    <v', y(r)> is compared against -eta W_r Var(Z_r), where the weights
    w_r(i) = 1 / theta''(y_i(r)) live on the support of y(r) and Z_r is
    v'_I for I drawn from the normalized weights.  Points where the support
    changes across the fd stencil are skipped and reported.
    """
    rs = (np.arange(grid, dtype=float) + 1.0) / (grid + 1.0)
    stencil = np.concatenate([rs - fd_step, rs, rs + fd_step])
    Y = interpolation_states(kernel, eta, trap, s, stencil)
    Ym, Y0, Yp = Y[:grid], Y[grid : 2 * grid], Y[2 * grid :]
    vp = trap.v_prime

    fd = ((Yp - Ym) @ vp) / (2.0 * fd_step)

    supports = Y0 > supp_eps
    changed = np.any((Ym > supp_eps) != (Yp > supp_eps), axis=1)

    max_err = 0.0
    min_margin = math.inf
    skipped: list[float] = []
    for idx in range(grid):
        if changed[idx]:
            skipped.append(float(rs[idx]))
            continue
        mask = supports[idx]
        w = np.zeros_like(vp)
        w[mask] = 1.0 / kernel.theta_second(Y0[idx][mask])
        W = w.sum()
        pi = w / W
        mean = float(pi @ vp)
        var = float(pi @ (vp - mean) ** 2)
        analytic = -eta * W * var
        max_err = max(max_err, abs(float(fd[idx]) - analytic))
        if mask[trap.i] and mask[trap.j]:
            two_point = trap.gap_v_prime**2 / (
                float(kernel.theta_second(Y0[idx][trap.i]))
                + float(kernel.theta_second(Y0[idx][trap.j]))
            )
            min_margin = min(min_margin, W * var - two_point)
    return VarianceCheck(
        max_abs_error=float(max_err),
        skipped_r=skipped,
        min_two_point_margin=float(min_margin),
    )


def path_mass_check(
    game: ZeroSumGame,
    kernel: Kernel,
    eta: float,
    trap: TrapConstruction,
    s: int,
    delta: float,
    grid: int = 101,
    br_tol: float = 1e-7,
) -> bool:
    """True iff every best-response coordinate stays in [delta, 1 - delta]
    along the interpolation path (upper side only checked when the
    best-response set has at least two actions)."""
    rs = np.linspace(0.0, 1.0, grid)
    Y = interpolation_states(kernel, eta, trap, s, rs)
    br = gap_profile(game, trap.x_star, br_tol=br_tol).br_set
    vals = Y[:, br]
    ok_low = bool(np.all(vals >= delta - 1e-12))
    if br.size >= 2:
        return ok_low and bool(np.all(vals <= 1.0 - delta + 1e-12))
    return ok_low
