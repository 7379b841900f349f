"""Separable regularizer kernels and their scalar convex-analysis maps.

A kernel is the scalar convex function theta whose coordinate-wise sum
defines a separable regularizer h(y) = sum_i theta(y_i) on the probability
simplex.  Three families are supported:

* entropic   theta(u) = u log u                 (steep)
* euclidean  theta(u) = u^2 / 2                 (non-steep)
* tsallis(q) theta(u) = (u^q - u) / (q - 1)     (steep for q < 1,
                                                 non-steep for q > 1)

All maps (theta, theta', theta'', the truncated inverse phi, the conjugate
theta*, and the dual potential V) are closed-form and accept scalars or
numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Kernel",
    "KernelGeometry",
    "KernelDomainError",
    "NormProfile",
    "entropic",
    "euclidean",
    "tsallis",
    "kernel_from_selector",
    "regularizer_range",
]


class KernelDomainError(ValueError):
    """Argument outside the domain of a kernel map."""


class NormProfile(Enum):
    """Norm pairing under which the regularizer's strong convexity holds."""

    L1_WITH_LINF_DUAL = "l1-linf"
    L2_SELF_DUAL = "l2-l2"

    @property
    def c_norm(self) -> float:
        # sup ||u||_inf / ||u|| is 1 for both the l1 and the l2 norm
        return 1.0

    def dual_ball_radius(self, m: int) -> float:
        """sup of the dual norm over the payoff box [-1, 1]^m."""
        if self is NormProfile.L1_WITH_LINF_DUAL:
            return 1.0
        return math.sqrt(m)

    def simplex_diameter(self) -> float:
        """Diameter of a probability simplex in the primal norm."""
        if self is NormProfile.L1_WITH_LINF_DUAL:
            return 2.0
        return math.sqrt(2.0)

    def dual_norm(self, u: np.ndarray) -> np.ndarray:
        """Dual norm, applied along the last axis."""
        u = np.asarray(u, dtype=float)
        if self is NormProfile.L1_WITH_LINF_DUAL:
            return np.max(np.abs(u), axis=-1)
        return np.sqrt(np.sum(u * u, axis=-1))

    def primal_norm(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self is NormProfile.L1_WITH_LINF_DUAL:
            return np.sum(np.abs(u), axis=-1)
        return np.sqrt(np.sum(u * u, axis=-1))


@dataclass(frozen=True)
class KernelGeometry:
    """Boundary and curvature metadata of a kernel.

    boundary_slope may be -inf (steep kernels).  boundary_energy is
    theta*(theta'(0+)) with the normalization theta*(-inf) = 0.
    strong_convexity_alpha is the modulus of strong convexity of
    h(y) = sum theta(y_i) on the simplex under norm_profile.
    """

    boundary_slope: float
    is_steep: bool
    boundary_energy: float
    strong_convexity_alpha: float
    norm_profile: NormProfile


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, (arr.ndim == 0)


def _ret(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


@dataclass(frozen=True)
class Kernel:
    """A separable regularizer kernel with its derived scalar maps.

    Instances are immutable; every method is a pure function of its
    arguments, so kernels are safe to share across threads.
    """

    family: str  # "entropic" | "euclidean" | "tsallis"
    q: float | None = None

    def __post_init__(self):
        if self.family not in ("entropic", "euclidean", "tsallis"):
            raise ValueError(f"unknown kernel family: {self.family!r}")
        if self.family == "tsallis":
            if self.q is None:
                raise ValueError("tsallis kernel requires a q parameter")
            if self.q == 1.0:
                raise ValueError("tsallis q=1 is the entropic kernel; use entropic()")
            if not 0.0 < self.q <= 2.0:
                # q > 2 has no uniform strong-convexity modulus on (0, 1]
                raise ValueError("tsallis q must lie in (0,1) or (1,2]")
        elif self.q is not None:
            raise ValueError(f"{self.family} kernel takes no q parameter")

    # ------------------------------------------------------------------
    # scalar maps
    # ------------------------------------------------------------------

    def theta(self, u):
        """Kernel value theta(u) on [0, 1]."""
        arr, scalar = _as_array(u)
        if np.any(arr < -1e-15) or np.any(arr > 1.0 + 1e-15):
            raise KernelDomainError("theta requires u in [0, 1]")
        arr = np.clip(arr, 0.0, 1.0)
        if self.family == "entropic":
            # continuous extension theta(0) = 0
            out = np.where(arr > 0.0, arr * np.log(np.where(arr > 0.0, arr, 1.0)), 0.0)
        elif self.family == "euclidean":
            out = 0.5 * arr * arr
        else:
            q = self.q
            out = (np.power(arr, q) - arr) / (q - 1.0)
        return _ret(out, scalar)

    def theta_prime(self, u):
        """Derivative theta'(u), strictly increasing on (0, 1]."""
        arr, scalar = _as_array(u)
        if np.any(arr < -1e-15) or np.any(arr > 1.0 + 1e-15):
            raise KernelDomainError("theta_prime requires u in [0, 1]")
        if self.is_steep and np.any(arr <= 0.0):
            raise KernelDomainError(
                "theta_prime is unbounded at u=0 for steep kernels; "
                "use geometry.boundary_slope"
            )
        arr = np.clip(arr, 0.0, 1.0)
        if self.family == "entropic":
            out = 1.0 + np.log(arr)
        elif self.family == "euclidean":
            out = arr.copy()
        else:
            q = self.q
            out = (q * np.power(arr, q - 1.0) - 1.0) / (q - 1.0)
        return _ret(out, scalar)

    def theta_second(self, u):
        """Second derivative theta''(u) > 0 on (0, 1)."""
        arr, scalar = _as_array(u)
        if np.any(arr <= 0.0) or np.any(arr > 1.0 + 1e-15):
            raise KernelDomainError("theta_second requires u in (0, 1]")
        if self.family == "entropic":
            out = 1.0 / arr
        elif self.family == "euclidean":
            out = np.ones_like(arr)
        else:
            out = self.q * np.power(arr, self.q - 2.0)
        return _ret(out, scalar)

    def phi(self, z):
        """Truncation to [0, 1] of the inverse of theta'.

        Accepts any real (including -inf, which maps to 0).  Equals 0 for
        z <= theta'(0+) and 1 for z >= theta'(1).
        """
        arr, scalar = _as_array(z)
        if self.family == "entropic":
            out = np.exp(np.minimum(arr, 1.0) - 1.0)
        elif self.family == "euclidean":
            out = np.clip(arr, 0.0, 1.0)
        else:
            q = self.q
            base = (1.0 + (q - 1.0) * np.minimum(arr, 1.0)) / q
            # clip the base at 0 before exponentiation (q > 1 branch)
            base = np.maximum(base, 0.0)
            out = np.power(base, 1.0 / (q - 1.0))
            out = np.minimum(out, 1.0)
        return _ret(out, scalar)

    def conjugate(self, z):
        """Convex conjugate theta*(z) = sup_{u in [0,1]} {z u - theta(u)}.

        Steep kernels take the limit value theta*(-inf) = 0.
        """
        arr, scalar = _as_array(z)
        if self.family == "entropic":
            out = np.where(arr > 1.0, arr, np.exp(np.minimum(arr, 1.0) - 1.0))
        elif self.family == "euclidean":
            out = np.where(
                arr > 1.0,
                arr - 0.5,
                0.5 * np.square(np.clip(arr, 0.0, 1.0)),
            )
        else:
            q = self.q
            base = (1.0 + (q - 1.0) * np.minimum(arr, 1.0)) / q
            base = np.maximum(base, 0.0)
            out = np.where(arr > 1.0, arr, np.power(base, q / (q - 1.0)))
        return _ret(out, scalar)

    def dual_potential(self, u):
        """Dual potential V(u) = u theta'(u) - theta(u) = theta*(theta'(u))."""
        arr, scalar = _as_array(u)
        if self.is_steep and np.any(arr <= 0.0):
            raise KernelDomainError("dual_potential requires u > 0 for steep kernels")
        direct = arr * self.theta_prime(arr) - self.theta(arr)
        via_conj = self.conjugate(self.theta_prime(arr))
        if np.max(np.abs(np.atleast_1d(direct - via_conj))) > 1e-10:
            raise AssertionError("dual potential inconsistent with conjugate")
        return _ret(direct, scalar)

    # ------------------------------------------------------------------
    # geometry
    # ------------------------------------------------------------------

    @property
    def is_steep(self) -> bool:
        if self.family == "entropic":
            return True
        if self.family == "euclidean":
            return False
        return self.q < 1.0

    @property
    def geometry(self) -> KernelGeometry:
        if self.family == "entropic":
            slope = -math.inf
            alpha = 1.0
            profile = NormProfile.L1_WITH_LINF_DUAL
        elif self.family == "euclidean":
            slope = 0.0
            alpha = 1.0
            profile = NormProfile.L2_SELF_DUAL
        else:
            q = self.q
            slope = -math.inf if q < 1.0 else -1.0 / (q - 1.0)
            # theta''(u) = q u^(q-2) >= q on (0, 1] for q <= 2
            alpha = q
            profile = NormProfile.L2_SELF_DUAL
        steep = slope == -math.inf
        energy = 0.0 if steep else float(self.conjugate(slope))
        return KernelGeometry(
            boundary_slope=slope,
            is_steep=steep,
            boundary_energy=energy,
            strong_convexity_alpha=alpha,
            norm_profile=profile,
        )

    def curvature_max(self, lo: float, hi: float) -> float:
        """sup of theta'' over [lo, hi] (theta'' is monotone per family)."""
        if not 0.0 < lo <= hi <= 1.0:
            raise KernelDomainError("curvature interval must satisfy 0 < lo <= hi <= 1")
        return max(float(self.theta_second(lo)), float(self.theta_second(hi)))

    def __str__(self) -> str:
        if self.family == "tsallis":
            return f"tsallis:{self.q:g}"
        return self.family


def entropic() -> Kernel:
    return Kernel("entropic")


def euclidean() -> Kernel:
    return Kernel("euclidean")


def tsallis(q: float) -> Kernel:
    return Kernel("tsallis", q=float(q))


def kernel_from_selector(selector: str) -> Kernel:
    """Parse the CLI kernel grammar: entropic | euclidean | tsallis:<q>."""
    sel = selector.strip().lower()
    if sel == "entropic":
        return entropic()
    if sel == "euclidean":
        return euclidean()
    if sel.startswith("tsallis:"):
        try:
            q = float(sel.split(":", 1)[1])
        except ValueError as exc:
            raise ValueError(f"bad tsallis parameter in {selector!r}") from exc
        return tsallis(q)
    raise ValueError(f"unknown kernel selector {selector!r}")


def regularizer_range(kernel: Kernel, m: int) -> tuple[float, float]:
    """(h_min, h_max) of h(y) = sum theta(y_i) over the m-simplex.

    h is convex, so the minimum sits at the uniform point and the maximum
    at a vertex for every supported family.
    """
    h_min = m * float(kernel.theta(1.0 / m))
    h_max = float(kernel.theta(1.0)) + (m - 1) * float(kernel.theta(0.0))
    return h_min, h_max
