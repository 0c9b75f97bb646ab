"""Local-realistic model of an entangled neutral-meson pair.

Each meson carries definite CP and flavor at every instant.  Four hidden
states cover the combinations:

    K1: CP=+1, S=+1      K2: CP=+1, S=-1
    K3: CP=-1, S=+1      K4: CP=-1, S=-1

CP is fixed at production and sets the decay rate (gamma_s for CP=+1,
gamma_l for CP=-1); flavor is allowed to jump at a hidden, pre-assigned
time, anti-correlated between the two sides.  The pair starts with equal
probability 1/4 in (K1,K4), (K2,K3), (K3,K2) or (K4,K1).

Writing E_S(t) = exp(-gamma_s t), E_L(t) = exp(-gamma_l t) and the
oscillation weights

    Q+-(t) = (1/2) [1 +- (2 sqrt(E_L E_S) / (E_L + E_S)) cos(delta_m t)]

(the prefactor reduces to 1 for equal widths), the per-branch flip
probabilities at time t given a fresh state at time 0 are

    p21(t|0) = E_S(t) Q-(t) - rho(t)        (short-lived branch)
    p43(t|0) = E_L(t) Q-(t) + rho(t)        (long-lived branch)

where rho(t) is a model freedom constrained at every t by

    -E_S Q+ <= rho <= E_S Q-    and    -E_L Q- <= rho <= E_L Q+ .

These four bounds are exactly the statement that the survival-stripped flip
fractions

    w2(t) = p21(t|0) / E_S(t) = Q-(t) - rho(t) e^{+gamma_s t}
    w4(t) = p43(t|0) / E_L(t) = Q-(t) + rho(t) e^{+gamma_l t}

are probabilities (lie in [0, 1]); this module computes in terms of w2/w4,
which removes the e^{+gamma t} overflow of the naive conditional formulas
and makes saturated profiles cancel exactly.  The later-time flips conditional
on the first measurement are increments of the flip fractions,

    p21(tb|ta) = E_S(tb - ta) [w2(tb) - w2(ta)]
    p43(tb|ta) = E_L(tb - ta) [w4(tb) - w4(ta)]

and the four like-flavor (antiparticle,antiparticle) joint probabilities for
ta <= tb are

    P1 = E_S(ta) w2(ta)       * E_L(ta) p43(tb|ta)
    P2 = E_S(ta) [1 - w2(ta)] * E_L(ta) p43(tb|ta)
    P3 = E_L(ta) w4(ta)       * E_S(ta) p21(tb|ta)
    P4 = E_L(ta) [1 - w4(ta)] * E_S(ta) p21(tb|ta)

Validity note: the increment form only represents probabilities where the
flip fractions are non-decreasing.  Once the cos(delta_m t) oscillation
outruns the decay envelope (near delta_m t ~ pi with kaon parameters, i.e.
gamma_s t beyond ~5) the fractions turn over and the conditionals of this
simplified model go negative.  No clamping is applied: values are returned
as computed, and callers probing the turnover region will see them.

Detector acceptance enters through four weights a1..a4 in [0, 1], one per
initial hidden configuration.  The observed like-flavor rate is then

    P = (1/4) [a1 P1 + a2 P2 + a3 P3 + a4 P4],

which is where hidden-variable-correlated detection (the detection loophole)
enters: unequal weights bias the post-selected sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import OscillationParams
from .quantum import _check_times

__all__ = [
    "HiddenState",
    "K1",
    "K2",
    "K3",
    "K4",
    "HIDDEN_STATES",
    "INITIAL_PAIRS",
    "InadmissibleRhoError",
    "TimeOrderingError",
    "WeightRangeError",
    "RhoProfile",
    "EfficiencyWeights",
    "survival",
    "q_plus",
    "q_minus",
    "rho_bounds",
    "p21_initial",
    "p43_initial",
    "p21_conditional",
    "p43_conditional",
    "joint_p",
    "joint_probabilities",
    "lrm_like_joint",
]

# Cancellation residue below this magnitude is reported as exactly zero, so
# saturated-profile identities hold exactly.
ZERO_SNAP = 1e-15

# Slack for the admissibility comparison, in flip-fraction units.
_ADMISSIBLE_TOL = 1e-12


class InadmissibleRhoError(ValueError):
    """rho(t) violates its admissibility bounds at some evaluated time."""

    def __init__(self, t: float, detail: str):
        self.t = float(t)
        super().__init__(f"rho profile inadmissible at t={t!r} s: {detail}")


class TimeOrderingError(ValueError):
    """An operation requiring t_a <= t_b was called with t_b < t_a."""


class WeightRangeError(ValueError):
    """An acceptance weight fell outside [0, 1]."""


@dataclass(frozen=True)
class HiddenState:
    label: str
    cp: int
    strangeness: int


K1 = HiddenState("K1", +1, +1)
K2 = HiddenState("K2", +1, -1)
K3 = HiddenState("K3", -1, +1)
K4 = HiddenState("K4", -1, -1)
HIDDEN_STATES = (K1, K2, K3, K4)

# (left, right) hidden states of the four equiprobable initial configurations.
INITIAL_PAIRS = ((K1, K4), (K2, K3), (K3, K2), (K4, K1))


def survival(params: OscillationParams, which: str, t):
    """Survival probability e^{-gamma t} of the short- or long-lived branch."""
    _check_times(t)
    if which == "short":
        return np.exp(-params.gamma_s * np.asarray(t, dtype=float))
    if which == "long":
        return np.exp(-params.gamma_l * np.asarray(t, dtype=float))
    raise ValueError(f"which must be 'short' or 'long', got {which!r}")


def _q_general(gamma_s: float, gamma_l: float, delta_m: float, t, sign: float):
    e_s = np.exp(-gamma_s * t)
    e_l = np.exp(-gamma_l * t)
    prefactor = 2.0 * np.sqrt(e_l * e_s) / (e_l + e_s)
    return 0.5 * (1.0 + sign * prefactor * np.cos(delta_m * t))


def _q_equal(delta_m: float, t, sign: float):
    # equal widths: the prefactor is identically one
    return 0.5 * (1.0 + sign * np.cos(delta_m * t))


def _q(params: OscillationParams, t, sign: float):
    t = np.asarray(t, dtype=float)
    if params.equal_widths:
        return _q_equal(params.delta_m, t, sign)
    return _q_general(params.gamma_s, params.gamma_l, params.delta_m, t, sign)


def q_plus(params: OscillationParams, t):
    """Oscillation weight Q+(t) in [0, 1]; Q+(0) = 1."""
    _check_times(t)
    return _q(params, t, +1.0)


def q_minus(params: OscillationParams, t):
    """Oscillation weight Q-(t) = 1 - Q+(t); Q-(0) = 0."""
    _check_times(t)
    return _q(params, t, -1.0)


def rho_bounds(params: OscillationParams, t):
    """Admissible range (lower, upper) of rho at time t.

    lower = max(-E_S Q+, -E_L Q-), upper = min(E_S Q-, E_L Q+); the range
    always contains 0 and degenerates to (0, 0) at t = 0.
    """
    _check_times(t)
    e_s = survival(params, "short", t)
    e_l = survival(params, "long", t)
    qp = _q(params, t, +1.0)
    qm = _q(params, t, -1.0)
    lower = np.maximum(-e_s * qp, -e_l * qm)
    upper = np.minimum(e_s * qm, e_l * qp)
    return lower, upper


def _interp_knots(knots: tuple[tuple[float, float], ...], t):
    ts = np.array([k[0] for k in knots])
    vs = np.array([k[1] for k in knots])
    return np.interp(np.asarray(t, dtype=float), ts, vs)


@dataclass(frozen=True)
class RhoProfile:
    """A member of the rho(t) model family.

    Kinds:
      * ``zero``                  rho = 0 (always admissible)
      * ``saturate_upper_short``  rho = E_S Q-  (upper bound of the first pair)
      * ``saturate_lower_short``  rho = -E_S Q+ (lower bound of the first pair)
      * ``tabulated``             linear interpolation between (t, rho) knots

    Admissibility is enforced at evaluation time, not only at knots; an
    inadmissible evaluation raises InadmissibleRhoError carrying the
    offending time.  The saturated kinds are not admissible everywhere:
    they obey the first bound pair by construction but can violate the
    second one (e.g. rho = -E_S Q+ near t = 0, or rho = E_S Q- for equal
    widths wherever Q- > Q+).
    """

    kind: str
    knots: tuple[tuple[float, float], ...] | None = None

    _KINDS = ("zero", "saturate_upper_short", "saturate_lower_short", "tabulated")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown rho profile kind {self.kind!r}")
        if self.kind == "tabulated":
            if not self.knots or len(self.knots) < 2:
                raise ValueError("tabulated profile needs at least two (t, rho) knots")
            ts = [k[0] for k in self.knots]
            if any(not math.isfinite(t) or t < 0.0 for t in ts):
                raise ValueError("knot times must be finite and non-negative")
            if sorted(ts) != ts or len(set(ts)) != len(ts):
                raise ValueError("knot times must be strictly increasing")
        elif self.knots is not None:
            raise ValueError(f"knots are only meaningful for 'tabulated', not {self.kind!r}")

    @classmethod
    def zero(cls) -> "RhoProfile":
        return cls("zero")

    @classmethod
    def saturate_upper_short(cls) -> "RhoProfile":
        return cls("saturate_upper_short")

    @classmethod
    def saturate_lower_short(cls) -> "RhoProfile":
        return cls("saturate_lower_short")

    @classmethod
    def tabulated(cls, knots) -> "RhoProfile":
        return cls("tabulated", tuple((float(t), float(v)) for t, v in knots))

    def value(self, params: OscillationParams, t):
        """rho(t), checked against both bound pairs at every evaluated time."""
        _check_times(t)
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            rho = np.zeros_like(t)
        elif self.kind == "saturate_upper_short":
            rho = survival(params, "short", t) * _q(params, t, -1.0)
        elif self.kind == "saturate_lower_short":
            rho = -survival(params, "short", t) * _q(params, t, +1.0)
        else:
            rho = _interp_knots(self.knots, t)
        self._check_fractions(params, t)
        return rho if rho.ndim else float(rho)

    # -- flip fractions ----------------------------------------------------
    #
    # w2 = Q- - rho e^{+gamma_s t}, w4 = Q- + rho e^{+gamma_l t}.  For the
    # closed-form kinds the exponential factors cancel analytically, which
    # both avoids overflow and makes the saturation identities exact.

    def _fractions(self, params: OscillationParams, t):
        t = np.asarray(t, dtype=float)
        qm = _q(params, t, -1.0)
        if self.kind == "zero":
            return qm, qm
        if self.kind == "saturate_upper_short":
            w2 = np.zeros_like(qm)
            w4 = qm * (1.0 + np.exp(-(params.gamma_s - params.gamma_l) * t))
            return w2, w4
        if self.kind == "saturate_lower_short":
            qp = _q(params, t, +1.0)
            w2 = np.ones_like(qm)
            w4 = qm - qp * np.exp(-(params.gamma_s - params.gamma_l) * t)
            return w2, w4
        rho = _interp_knots(self.knots, t)
        with np.errstate(over="ignore"):
            scaled_s = rho * np.exp(params.gamma_s * t)
            scaled_l = rho * np.exp(params.gamma_l * t)
        return qm - scaled_s, qm + scaled_l

    def _check_fractions(self, params: OscillationParams, t):
        w2, w4 = self._fractions(params, t)
        bad = ~((w2 >= -_ADMISSIBLE_TOL) & (w2 <= 1.0 + _ADMISSIBLE_TOL)
                & (w4 >= -_ADMISSIBLE_TOL) & (w4 <= 1.0 + _ADMISSIBLE_TOL))
        if np.any(bad):
            t_arr = np.broadcast_to(np.asarray(t, dtype=float), bad.shape)
            t_bad = float(t_arr[bad].flat[0])
            lo, up = rho_bounds(params, t_bad)
            raise InadmissibleRhoError(
                t_bad, f"value outside [{float(lo):.6e}, {float(up):.6e}]"
            )
        return w2, w4

    def checked_fractions(self, params: OscillationParams, t):
        """(w2, w4) flip fractions at t, admissibility enforced."""
        _check_times(t)
        return self._check_fractions(params, t)


def p21_initial(params: OscillationParams, rho: RhoProfile, t):
    """Probability that a fresh short-lived branch has flipped flavor by t."""
    w2, _ = rho.checked_fractions(params, t)
    return _snap(survival(params, "short", t) * w2)


def p43_initial(params: OscillationParams, rho: RhoProfile, t):
    """Probability that a fresh long-lived branch has flipped flavor by t."""
    _, w4 = rho.checked_fractions(params, t)
    return _snap(survival(params, "long", t) * w4)


def _require_ordered(t_a, t_b) -> None:
    if np.any(np.asarray(t_b, dtype=float) < np.asarray(t_a, dtype=float)):
        raise TimeOrderingError("conditional flips require t_a <= t_b")


def _snap(x):
    """Report cancellation residue within ZERO_SNAP of zero as exactly 0."""
    x = np.asarray(x, dtype=float)
    out = np.where(np.abs(x) < ZERO_SNAP, 0.0, x)
    return out if out.ndim else float(out)


def p21_conditional(params: OscillationParams, rho: RhoProfile, t_a, t_b):
    """Short-branch flip probability within (t_a, t_b], survival included.

    Exactly zero at t_b = t_a.  Negative values flag the turnover region of
    the simplified model (see module docstring); they are not clamped.
    """
    _check_times(t_a, t_b)
    _require_ordered(t_a, t_b)
    w2_a, _ = rho.checked_fractions(params, t_a)
    w2_b, _ = rho.checked_fractions(params, t_b)
    dt = np.asarray(t_b, dtype=float) - np.asarray(t_a, dtype=float)
    return _snap(np.exp(-params.gamma_s * dt) * (w2_b - w2_a))


def p43_conditional(params: OscillationParams, rho: RhoProfile, t_a, t_b):
    """Long-branch flip probability within (t_a, t_b], survival included."""
    _check_times(t_a, t_b)
    _require_ordered(t_a, t_b)
    _, w4_a = rho.checked_fractions(params, t_a)
    _, w4_b = rho.checked_fractions(params, t_b)
    dt = np.asarray(t_b, dtype=float) - np.asarray(t_a, dtype=float)
    return _snap(np.exp(-params.gamma_l * dt) * (w4_b - w4_a))


def joint_probabilities(params: OscillationParams, rho: RhoProfile, t_a, t_b):
    """The four like-flavor joint probabilities P1..P4, stacked on a new last axis.

    Requires t_a <= t_b (use lrm_like_joint for the symmetrized observable).
    """
    _check_times(t_a, t_b)
    _require_ordered(t_a, t_b)
    t_a = np.asarray(t_a, dtype=float)
    t_b = np.asarray(t_b, dtype=float)
    w2, w4 = rho.checked_fractions(params, t_a)
    w2_b, w4_b = rho.checked_fractions(params, t_b)
    dt = t_b - t_a
    c21 = np.exp(-params.gamma_s * dt) * (w2_b - w2)
    c43 = np.exp(-params.gamma_l * dt) * (w4_b - w4)
    e_s = np.exp(-params.gamma_s * t_a)
    e_l = np.exp(-params.gamma_l * t_a)
    first = e_s * e_l
    stacked = np.stack(
        [
            first * w2 * c43,
            first * (1.0 - w2) * c43,
            first * w4 * c21,
            first * (1.0 - w4) * c21,
        ],
        axis=-1,
    )
    return _snap(stacked)


def joint_p(params: OscillationParams, rho: RhoProfile, index: int, t_a, t_b):
    """P_index for one initial configuration, index in 1..4."""
    if index not in (1, 2, 3, 4):
        raise ValueError(f"initial-pair index must be 1..4, got {index!r}")
    out = joint_probabilities(params, rho, t_a, t_b)[..., index - 1]
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class EfficiencyWeights:
    """Acceptance weights a1..a4 in [0, 1], constants or functions of (t_a, t_b).

    Weight a_i multiplies the joint probability of the i-th initial hidden
    configuration; the total efficiency is the mean of the four.
    """

    a1: float | Callable
    a2: float | Callable
    a3: float | Callable
    a4: float | Callable

    def __post_init__(self) -> None:
        for w in self.as_tuple():
            if not callable(w):
                _validate_weight_values(np.asarray(w, dtype=float))

    @classmethod
    def constant(cls, a1: float, a2: float, a3: float, a4: float) -> "EfficiencyWeights":
        return cls(float(a1), float(a2), float(a3), float(a4))

    @classmethod
    def uniform(cls, value: float) -> "EfficiencyWeights":
        return cls.constant(value, value, value, value)

    def as_tuple(self):
        return (self.a1, self.a2, self.a3, self.a4)

    @property
    def is_constant(self) -> bool:
        return not any(callable(w) for w in self.as_tuple())

    def values(self, t_a, t_b) -> np.ndarray:
        """Evaluate the four weights at (t_a, t_b), stacked on a new last axis."""
        t_a = np.asarray(t_a, dtype=float)
        t_b = np.asarray(t_b, dtype=float)
        cols = []
        for w in self.as_tuple():
            v = np.asarray(w(t_a, t_b) if callable(w) else w, dtype=float)
            cols.append(np.broadcast_to(v, np.broadcast_shapes(v.shape, t_a.shape, t_b.shape)))
        out = np.stack(cols, axis=-1)
        _validate_weight_values(out)
        return out

    def total_efficiency(self, t_a=0.0, t_b=0.0) -> float:
        """Mean of the four weights, evaluated at (t_a, t_b) if time-dependent."""
        return float(np.mean(self.values(t_a, t_b), axis=-1))


def _validate_weight_values(values: np.ndarray) -> None:
    if np.any(~np.isfinite(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        bad = values[~(np.isfinite(values) & (values >= 0.0) & (values <= 1.0))]
        raise WeightRangeError(f"acceptance weights must lie in [0, 1]; got {bad.flat[0]!r}")


def lrm_like_joint(params: OscillationParams, rho: RhoProfile, weights: EfficiencyWeights, t_a, t_b):
    """Efficiency-weighted like-flavor prediction (1/4) sum_i a_i P_i.

    Symmetric in its time arguments: for t_a > t_b the two sides are
    relabelled, which maps configurations 1<->4 and 2<->3, so the joint
    probabilities are evaluated at the ordered times with the weight order
    reversed.  Time-dependent weights are always evaluated at the caller's
    (t_a, t_b).
    """
    _check_times(t_a, t_b)
    t_a = np.asarray(t_a, dtype=float)
    t_b = np.asarray(t_b, dtype=float)
    lo = np.minimum(t_a, t_b)
    hi = np.maximum(t_a, t_b)
    p = joint_probabilities(params, rho, lo, hi)
    w = weights.values(t_a, t_b)
    swapped = (t_a > t_b)[..., None]
    w_eff = np.where(swapped, w[..., ::-1], w)
    out = 0.25 * np.sum(w_eff * p, axis=-1)
    return out if out.ndim else float(out)
