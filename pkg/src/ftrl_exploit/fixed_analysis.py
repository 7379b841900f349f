"""Closed-form exploitation envelopes for fixed optimizer strategies.

Against a fixed strategy the learner's transient mass on suboptimal
actions is worth money to the optimizer; the cumulative value (the LAG) is
sandwiched between two dual-potential drops scaled by (m - k)/eta.  The
envelopes freeze once a non-steep kernel eliminates suboptimal actions;
steep kernels keep an asymptotic tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .choicemap import solve_choice_map
from .game import GapProfile
from .kernels import Kernel

__all__ = [
    "Regime",
    "ExploitationEnvelope",
    "DegenerateProfileError",
    "exploitation_bounds",
    "asymptotic_bounds",
    "discrete_bounds",
    "l1_distance_bounds",
]


class Regime(Enum):
    STEEP = "steep"
    NON_STEEP = "non-steep"


class DegenerateProfileError(ValueError):
    """Every learner action is a best response: the envelope is identically 0."""


@dataclass(frozen=True)
class ExploitationEnvelope:
    lower_dV: float
    upper_dV: float
    lag_lower: float
    lag_upper: float
    saturation_time: float  # +inf for steep kernels
    regime: Regime


def _require_profile(profile: GapProfile) -> tuple[int, int, float, float]:
    m, k = profile.m, profile.k
    if k >= m or profile.delta_min is None:
        raise DegenerateProfileError(
            "all actions are best responses; exploitation envelope is 0"
        )
    if profile.delta_min <= 0:
        raise ValueError("delta_min must be positive")
    return m, k, profile.delta_min, profile.delta_max


def _dv(kernel: Kernel, u: float, rate: float, T: float) -> float:
    """V(u) - theta*(max{theta'(u) - rate T, theta'(0+)})."""
    slope0 = kernel.geometry.boundary_slope
    endpoint = max(float(kernel.theta_prime(u)) - rate * T, slope0)
    end_energy = 0.0 if endpoint == -math.inf else float(kernel.conjugate(endpoint))
    return float(kernel.dual_potential(u)) - end_energy


def exploitation_bounds(
    kernel: Kernel, profile: GapProfile, eta: float, T: float
) -> ExploitationEnvelope:
    """Two-sided envelope on the continuous LAG at horizon T.

    The max{., theta'(0+)} clamp freezes each bound at its own clip time,
    so for non-steep kernels the envelope is constant past saturation.
    """
    m, k, dmin, dmax = _require_profile(profile)
    if eta <= 0 or T < 0:
        raise ValueError("need eta > 0 and T >= 0")
    lower_dV = (dmin / dmax) * _dv(kernel, 1.0 / m, eta * dmax, T)
    upper_dV = (dmax / dmin) * _dv(kernel, 1.0 / k, eta * dmin, T)
    geo = kernel.geometry
    if geo.is_steep:
        sat = math.inf
        regime = Regime.STEEP
    else:
        sat = (float(kernel.theta_prime(1.0 / k)) - geo.boundary_slope) / (eta * dmin)
        regime = Regime.NON_STEEP
    scale = (m - k) / eta
    return ExploitationEnvelope(
        lower_dV=lower_dV,
        upper_dV=upper_dV,
        lag_lower=scale * lower_dV,
        lag_upper=scale * upper_dV,
        saturation_time=sat,
        regime=regime,
    )


def asymptotic_bounds(
    kernel: Kernel, profile: GapProfile, eta: float
) -> tuple[float, float]:
    """LAG envelope in the eta T -> infinity limit.

    Steep kernels keep the full dual-potential budget; non-steep kernels
    lose the boundary energy (which is where they saturate).
    """
    m, k, dmin, dmax = _require_profile(profile)
    if eta <= 0:
        raise ValueError("eta must be positive")
    geo = kernel.geometry
    v_b = geo.boundary_energy
    scale = (m - k) / eta
    lo = scale * (dmin / dmax) * (float(kernel.dual_potential(1.0 / m)) - v_b)
    hi = scale * (dmax / dmin) * (float(kernel.dual_potential(1.0 / k)) - v_b)
    return lo, hi


def discrete_bounds(
    kernel: Kernel, profile: GapProfile, eta: float, T: int
) -> tuple[float, float]:
    """Envelope for the discrete-time LAG: continuous bounds plus the
    additive constant (m - k)/k * delta_max on the upper side."""
    if T < 1 or T != int(T):
        raise ValueError("T must be a positive integer")
    m, k, _, dmax = _require_profile(profile)
    env = exploitation_bounds(kernel, profile, eta, float(T))
    return env.lag_lower, env.lag_upper + (m - k) / k * dmax


def l1_distance_bounds(
    kernel: Kernel, profile: GapProfile, eta: float, t: float
) -> tuple[float, float, float]:
    """(exact, lower, upper) for ||y(t) - unif(br)||_1 under the fixed strategy.

    The exact value is 2 sum_{j not in br} y_j(t) with
    y(t) = Q_h(-eta t A^T x_hat); the bounds come from the per-coordinate
    clip formulas.
    """
    m, k, dmin, dmax = _require_profile(profile)
    res = solve_choice_map(kernel, -eta * t * profile.v)
    out_mask = np.ones(m, dtype=bool)
    out_mask[profile.br_set] = False
    exact = 2.0 * float(res.y[out_mask].sum())
    lower = 2.0 * (m - k) * float(kernel.phi(kernel.theta_prime(1.0 / m) - eta * t * dmax))
    upper = 2.0 * (m - k) * float(kernel.phi(kernel.theta_prime(1.0 / k) - eta * t * dmin))
    return exact, lower, upper
