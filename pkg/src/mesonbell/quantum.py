"""Quantum-mechanical joint flavor-tag probabilities for entangled meson pairs.

The pair is produced in the antisymmetric state

    |psi> = (|P0>|P0bar> - |P0bar>|P0>) / sqrt(2)
          = (|P_L>|P_S> - |P_S>|P_L>) / sqrt(2)

and each side is flavor-tagged at its own proper time.  With survival factors
E_S(t) = exp(-gamma_s t), E_L(t) = exp(-gamma_l t) the like-flavor joint
probability (both tagged antiparticle, equal to both tagged particle by CP
symmetry of the state) is

    P_like(ta, tb) = (1/8) [ E_S(ta) E_L(tb) + E_L(ta) E_S(tb)
                             - 2 sqrt(E_S E_L)(ta) sqrt(E_S E_L)(tb)
                               cos(delta_m (ta - tb)) ]

and the unlike-flavor joint is the same expression with the interference term
flipped in sign; that sign is the only choice for which the four outcomes of
an undecayed pair sum to one, and it also follows from the amplitude-level
calculation.  For equal widths gamma_s = gamma_l = gamma this collapses to

    P_like(ta, tb) = (1/4) exp(-gamma (ta + tb)) [1 - cos(delta_m (ta - tb))]

and the unlike case carries [1 + cos(...)].

All functions are pure and accept scalars or numpy arrays for the times.
CP violation in the weak interactions is neglected throughout.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .constants import OscillationParams

__all__ = [
    "TimePair",
    "Flavor",
    "FlavorOutcome",
    "QuadratureError",
    "qm_like_joint",
    "qm_unlike_joint",
    "qm_flavor_table",
    "asymmetry",
    "integrated_ratio",
]

# Both joints below this absolute floor make the asymmetry denominator
# meaningless (pure underflow noise).
DENOMINATOR_FLOOR = 1e-300

JointProvider = Callable[[OscillationParams, float, float], float]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested relative tolerance."""


class Flavor(enum.Enum):
    PARTICLE = "particle"
    ANTIPARTICLE = "antiparticle"


@dataclass(frozen=True)
class FlavorOutcome:
    """Flavor tags observed on the left and right side of one pair."""

    left: Flavor
    right: Flavor

    @property
    def like(self) -> bool:
        return self.left is self.right


@dataclass(frozen=True)
class TimePair:
    """Proper times (seconds) at which the two mesons are flavor-tagged."""

    t_a: float
    t_b: float

    def __post_init__(self) -> None:
        for name in ("t_a", "t_b"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")


def _check_times(*times) -> None:
    for t in times:
        arr = np.asarray(t, dtype=float)
        if np.any(~np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValueError("proper times must be finite and non-negative")


def _joint_general(gamma_s, gamma_l, delta_m, t_a, t_b, sign):
    """(1/8)[e^{-(gs ta + gl tb)} + e^{-(gl ta + gs tb)} + sign*2 e^{-(gs+gl)(ta+tb)/2} cos(dm (ta-tb))]."""
    direct = np.exp(-(gamma_s * t_a + gamma_l * t_b)) + np.exp(-(gamma_l * t_a + gamma_s * t_b))
    interference = 2.0 * np.exp(-0.5 * (gamma_s + gamma_l) * (t_a + t_b)) * np.cos(delta_m * (t_a - t_b))
    return 0.125 * (direct + sign * interference)


def _joint_equal_width(gamma, delta_m, t_a, t_b, sign):
    """(1/4) e^{-gamma (ta+tb)} [1 + sign*(-1)*... ]; sign=-1 gives the like-flavor form."""
    return 0.25 * np.exp(-gamma * (t_a + t_b)) * (1.0 + sign * np.cos(delta_m * (t_a - t_b)))


def _joint(params: OscillationParams, t_a, t_b, sign):
    _check_times(t_a, t_b)
    if params.equal_widths:
        return _joint_equal_width(params.gamma_s, params.delta_m, t_a, t_b, sign)
    return _joint_general(params.gamma_s, params.gamma_l, params.delta_m, t_a, t_b, sign)


def qm_like_joint(params: OscillationParams, t_a, t_b):
    """Probability of tagging the same flavor on both sides at (t_a, t_b).

    Vanishes at t_a = t_b: the antisymmetric state is perfectly
    anti-correlated at equal proper times.
    """
    return _joint(params, t_a, t_b, -1.0)


def qm_unlike_joint(params: OscillationParams, t_a, t_b):
    """Probability of tagging opposite flavors at (t_a, t_b)."""
    return _joint(params, t_a, t_b, +1.0)


def qm_flavor_table(params: OscillationParams, t_a: float, t_b: float) -> dict[FlavorOutcome, float]:
    """All four joint tag probabilities at one time pair.

    The entries sum to (1/2)[E_S(ta) E_L(tb) + E_L(ta) E_S(tb)], the
    probability that both mesons are still undecayed enough to be tagged.
    """
    like = float(qm_like_joint(params, t_a, t_b))
    unlike = float(qm_unlike_joint(params, t_a, t_b))
    p, a = Flavor.PARTICLE, Flavor.ANTIPARTICLE
    return {
        FlavorOutcome(a, a): like,
        FlavorOutcome(p, p): like,
        FlavorOutcome(a, p): unlike,
        FlavorOutcome(p, a): unlike,
    }


def asymmetry(
    params: OscillationParams,
    t_a,
    t_b,
    like_joint: JointProvider = qm_like_joint,
    unlike_joint: JointProvider = qm_unlike_joint,
):
    """Flavor asymmetry (P_like - P_unlike) / (P_like + P_unlike) in [-1, 1].

    Any joint-probability providers with the same signature may be supplied,
    so the identical observable can be evaluated for alternative models.
    """
    like = np.asarray(like_joint(params, t_a, t_b), dtype=float)
    unlike = np.asarray(unlike_joint(params, t_a, t_b), dtype=float)
    if np.any((np.abs(like) < DENOMINATOR_FLOOR) & (np.abs(unlike) < DENOMINATOR_FLOOR)):
        raise ZeroDivisionError(
            f"asymmetry denominator degenerate: both joints below {DENOMINATOR_FLOOR:g}"
        )
    out = (like - unlike) / (like + unlike)
    return out if out.ndim else float(out)


def integrated_ratio(
    params: OscillationParams,
    like_joint: JointProvider = qm_like_joint,
    unlike_joint: JointProvider = qm_unlike_joint,
    rel_tol: float = 1e-8,
    _limit: int = 200,
) -> float:
    """Ratio of time-integrated like- to unlike-flavor joint probabilities.

    R = (int P[like] dta dtb) / (int P[unlike] dta dtb) over [0, inf)^2,
    computed by adaptive quadrature.  For equal widths this equals
    x^2 / (2 + x^2) with x = delta_m / gamma.

    The semi-infinite axes are mapped to [0, 1) via u = 1 - exp(-gamma_l t),
    the slowest decay scale, so every exponential term becomes a bounded
    power of (1 - u); the mapping is truncated just below u = 1, which cuts
    the integrand beyond ~27 long-lived lifetimes (relative weight ~1e-12).

    Raises QuadratureError when the error estimate exceeds ``rel_tol``.
    """
    g_sub = params.gamma_l
    u_max = 1.0 - 1e-12

    def transformed(joint):
        def integrand(u_b, u_a):
            t_a = -np.log1p(-u_a) / g_sub
            t_b = -np.log1p(-u_b) / g_sub
            jac = 1.0 / (g_sub * g_sub * (1.0 - u_a) * (1.0 - u_b))
            return joint(params, t_a, t_b) * jac
        return integrand

    # the inner integral runs tighter than the outer one, so the outer
    # extrapolation is not fed inner roundoff noise
    opts = [
        {"epsabs": 0.0, "epsrel": rel_tol * 1e-3, "limit": _limit},
        {"epsabs": 0.0, "epsrel": rel_tol * 1e-2, "limit": _limit},
    ]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=integrate.IntegrationWarning)
        num, num_err = integrate.nquad(transformed(like_joint), [(0.0, u_max), (0.0, u_max)], opts=opts)
        den, den_err = integrate.nquad(transformed(unlike_joint), [(0.0, u_max), (0.0, u_max)], opts=opts)
    if den <= 0.0:
        raise QuadratureError("unlike-flavor integral is not positive")
    ratio = num / den
    ratio_err = (num_err + abs(ratio) * den_err) / den
    if ratio_err > rel_tol * max(abs(ratio), 1e-12):
        raise QuadratureError(
            f"quadrature error estimate {ratio_err:.3e} exceeds rel_tol={rel_tol:g} (ratio={ratio:.6g})"
        )
    return ratio
