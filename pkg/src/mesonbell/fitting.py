"""Fitting acceptance weights so the biased local-realistic rate tracks QM.

The observed like-flavor rate of the hidden-state model is linear in the
acceptance weights, LRM(a) = (1/4) sum_i a_i P_i(t_a, t_b).  Two fitting
problems are posed over a time grid:

  * ``match_qm``      minimize  max_k | LRM_k(a) - QM_k |
  * ``underbound_qm`` minimize  max_k max(0, LRM_k(a) - QM_k)

subject to a fixed total efficiency mean(a) = eta and box bounds
a_i in [0, 1].  Both objectives are convex piecewise-linear in a; they are
minimized by deterministic multi-start projected coordinate descent (pairwise
exchange moves preserve the efficiency constraint exactly, each move solved
by ternary search on the convex one-dimensional section).

There is also the pointwise "trivial" assignment a_i = QM / P_i that
reproduces QM identically wherever it is feasible, i.e. wherever the
required ratios stay inside [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .constants import OscillationParams
from .lrm import EfficiencyWeights, RhoProfile, joint_probabilities
from .quantum import qm_like_joint

__all__ = [
    "FitProblem",
    "FitResult",
    "TrivialWeightsResult",
    "CurveTable",
    "default_grid",
    "trivial_weights",
    "fit_constant_weights",
    "evaluate_gap",
]

OBJECTIVES = ("match_qm", "underbound_qm")

# P_i at or below this is treated as unsupported when forming QM / P_i.
SUPPORT_FLOOR = 1e-300

_MAX_EVALS = 100_000
_PASS_TOL = 1e-12
_TERNARY_ITERS = 70
_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def default_grid(params: OscillationParams, n: int = 200,
                 lo: float = 0.2, hi: float = 5.0, tb_factor: float = 2.0):
    """Grid t_a in [lo, hi]/gamma_s (n points) with t_b = tb_factor * t_a."""
    t_a = np.linspace(lo, hi, n) / params.gamma_s
    return t_a, tb_factor * t_a


@dataclass(frozen=True, eq=False)
class FitProblem:
    """One weight-fitting task over a fixed grid of time pairs."""

    params: OscillationParams
    rho: RhoProfile
    eta: float
    grid_t_a: np.ndarray
    grid_t_b: np.ndarray
    objective: str = "match_qm"

    def __post_init__(self) -> None:
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        if not (0.0 < self.eta <= 1.0):
            raise ValueError(f"target efficiency must lie in (0, 1], got {self.eta!r}")
        t_a = np.asarray(self.grid_t_a, dtype=float)
        t_b = np.asarray(self.grid_t_b, dtype=float)
        if t_a.size == 0 or t_a.shape != t_b.shape:
            raise ValueError("grid must be non-empty with matching t_a / t_b shapes")
        object.__setattr__(self, "grid_t_a", t_a)
        object.__setattr__(self, "grid_t_b", t_b)

    @classmethod
    def on_default_grid(cls, params, rho, eta, objective="match_qm", n=200) -> "FitProblem":
        t_a, t_b = default_grid(params, n=n)
        return cls(params, rho, eta, t_a, t_b, objective)

    def tables(self):
        """(P, qm) with P of shape (n, 4) and qm of shape (n,)."""
        p = joint_probabilities(self.params, self.rho, self.grid_t_a, self.grid_t_b)
        qm = np.asarray(qm_like_joint(self.params, self.grid_t_a, self.grid_t_b), dtype=float)
        return p, qm


@dataclass(frozen=True)
class FitResult:
    weights: EfficiencyWeights
    achieved_eta: float
    max_abs_gap: float
    iterations: int


@dataclass(frozen=True)
class TrivialWeightsResult:
    """Pointwise a_i = QM / P_i weights plus the feasibility diagnostics.

    ``raw_ratios`` holds the unclipped ratios on the problem grid (0 where
    P_i has no support); the returned weight functions clip them into [0, 1].
    Points where any ratio had to be clipped are flagged in ``capped`` and
    the exact-reproduction guarantee is lost there, which is why they are
    excluded from ``feasible``.  ``pointwise_eta`` is the mean of the four
    clipped weights per grid point; a fixed overall efficiency target is not
    representable by this assignment, only reported.
    """

    weights: EfficiencyWeights
    grid_t_a: np.ndarray
    grid_t_b: np.ndarray
    raw_ratios: np.ndarray          # (n, 4)
    supported: np.ndarray           # (n, 4) bool, P_i > SUPPORT_FLOOR
    capped: np.ndarray              # (n,) bool, some ratio fell outside [0, 1]
    feasible: np.ndarray            # (n,) bool, exact reproduction holds
    pointwise_eta: np.ndarray       # (n,)

    def capped_points(self) -> Iterator[tuple[float, float, np.ndarray]]:
        for k in np.flatnonzero(self.capped):
            yield float(self.grid_t_a[k]), float(self.grid_t_b[k]), self.raw_ratios[k]


def _trivial_ratio_table(params, rho, t_a, t_b):
    p = np.atleast_2d(joint_probabilities(params, rho, t_a, t_b))
    qm = np.atleast_1d(np.asarray(qm_like_joint(params, t_a, t_b), dtype=float))
    supported = p > SUPPORT_FLOOR
    n_support = supported.sum(axis=1)
    ratios = np.zeros_like(p)
    # spread the reproduction load evenly over the supported configurations
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(n_support > 0, 4.0 / np.maximum(n_support, 1), 0.0)
        ratios = np.where(supported, scale[:, None] * qm[:, None] / np.where(supported, p, 1.0), 0.0)
    return ratios, supported


def trivial_weights(problem: FitProblem) -> TrivialWeightsResult:
    """The pointwise trivial solution a_i(t_a, t_b) = QM / P_i with diagnostics.

    At grid points where some P_i has no support, that weight is set to 0 and
    the remaining ones are rescaled by 4/k to keep the identity
    (1/4) sum a_i P_i = QM.  Ratios outside [0, 1] are clipped by the returned
    weight functions, never silently: such points are reported as capped and
    not counted feasible.
    """
    params, rho = problem.params, problem.rho
    ratios, supported = _trivial_ratio_table(params, rho, problem.grid_t_a, problem.grid_t_b)
    capped = np.any((ratios < 0.0) | (ratios > 1.0), axis=1)
    feasible = ~capped & np.any(supported, axis=1)
    clipped = np.clip(ratios, 0.0, 1.0)

    def make_weight(i):
        def weight(t_a, t_b):
            r, _ = _trivial_ratio_table(params, rho, t_a, t_b)
            out = np.clip(r[..., i], 0.0, 1.0)
            return out if np.ndim(t_a) or np.ndim(t_b) else float(out)
        return weight

    weights = EfficiencyWeights(*(make_weight(i) for i in range(4)))
    return TrivialWeightsResult(
        weights=weights,
        grid_t_a=problem.grid_t_a,
        grid_t_b=problem.grid_t_b,
        raw_ratios=ratios,
        supported=supported,
        capped=capped,
        feasible=feasible,
        pointwise_eta=clipped.mean(axis=1),
    )


def _project_box_sum(v: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection of v onto {a in [0,1]^4, sum a = total}."""
    lo = float(v.min()) - 1.5
    hi = float(v.max()) + 1.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.clip(v - mid, 0.0, 1.0).sum() > total:
            lo = mid
        else:
            hi = mid
    return np.clip(v - 0.5 * (lo + hi), 0.0, 1.0)


def _gap_vector(p: np.ndarray, qm: np.ndarray, a: np.ndarray) -> np.ndarray:
    return p @ a / 4.0 - qm


def _objective_value(gaps: np.ndarray, objective: str) -> float:
    if objective == "match_qm":
        return float(np.max(np.abs(gaps)))
    return float(max(0.0, np.max(gaps)))


def fit_constant_weights(problem: FitProblem) -> FitResult:
    """Best constant weights for the problem objective at the target efficiency.

    Deterministic: 16 starts (the unit-box corners projected onto the
    constraint set), pairwise-exchange coordinate descent with ternary line
    search, convergence when a full pass improves the objective by less than
    1e-12, hard cap of 1e5 objective evaluations.
    """
    p, qm = problem.tables()
    total = 4.0 * problem.eta
    objective = problem.objective

    evals = 0

    def f(a) -> float:
        nonlocal evals
        evals += 1
        return _objective_value(_gap_vector(p, qm, a), objective)

    def line_search(a: np.ndarray) -> np.ndarray:
        # exchange moves a_i += d, a_j -= d keep the efficiency fixed
        for i, j in _PAIRS:
            d_lo = max(-a[i], a[j] - 1.0)
            d_hi = min(1.0 - a[i], a[j])
            if d_hi - d_lo < 1e-18:
                continue
            direction = np.zeros(4)
            direction[i], direction[j] = 1.0, -1.0
            lo, hi = d_lo, d_hi
            for _ in range(_TERNARY_ITERS):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                if f(a + direction * m1) <= f(a + direction * m2):
                    hi = m2
                else:
                    lo = m1
            d = 0.5 * (lo + hi)
            a = a + direction * d
        return a

    starts = [np.array([(k >> b) & 1 for b in range(4)], dtype=float) for k in range(16)]
    best_a: np.ndarray | None = None
    best_f = np.inf
    for corner in starts:
        a = _project_box_sum(corner, total)
        value = f(a)
        while evals < _MAX_EVALS:
            a = line_search(a)
            new_value = f(a)
            if value - new_value < _PASS_TOL:
                value = min(value, new_value)
                break
            value = new_value
        if value < best_f:
            best_f, best_a = value, a.copy()
        if evals >= _MAX_EVALS:
            break

    best_a = _project_box_sum(best_a, total)
    best_f = _objective_value(_gap_vector(p, qm, best_a), objective)
    return FitResult(
        weights=EfficiencyWeights.constant(*best_a),
        achieved_eta=float(best_a.mean()),
        max_abs_gap=best_f,
        iterations=evals,
    )


@dataclass(frozen=True)
class CurveTable:
    """Sampled per-grid-point comparison of the QM and weighted-LRM curves."""

    t_a: np.ndarray
    t_b: np.ndarray
    qm: np.ndarray
    lrm: np.ndarray
    p: np.ndarray           # (n, 4) joint probabilities P1..P4
    gap: np.ndarray         # signed lrm - qm
    columns = ("t_a", "qm", "lrm", "p1", "p2", "p3", "p4", "gap")

    def rows(self, time_scale: float = 1.0) -> Iterator[tuple[float, ...]]:
        """Yield CSV rows; times are multiplied by ``time_scale``."""
        for k in range(self.t_a.size):
            yield (
                float(self.t_a[k]) * time_scale,
                float(self.qm[k]),
                float(self.lrm[k]),
                float(self.p[k, 0]),
                float(self.p[k, 1]),
                float(self.p[k, 2]),
                float(self.p[k, 3]),
                float(self.gap[k]),
            )

    def max_abs_gap(self) -> float:
        return float(np.max(np.abs(self.gap)))

    def max_excess(self) -> float:
        """Largest positive overshoot of the LRM above the QM curve."""
        return float(max(0.0, np.max(self.gap)))


def evaluate_gap(params: OscillationParams, rho: RhoProfile, weights: EfficiencyWeights,
                 grid_t_a, grid_t_b) -> CurveTable:
    """Tabulate QM, weighted LRM, the four P_i and the signed gap on a grid."""
    t_a = np.asarray(grid_t_a, dtype=float)
    t_b = np.asarray(grid_t_b, dtype=float)
    p = np.atleast_2d(joint_probabilities(params, rho, t_a, t_b))
    w = np.atleast_2d(weights.values(t_a, t_b))
    lrm = 0.25 * np.sum(w * p, axis=-1)
    qm = np.atleast_1d(np.asarray(qm_like_joint(params, t_a, t_b), dtype=float))
    return CurveTable(t_a=t_a, t_b=t_b, qm=qm, lrm=lrm, p=p, gap=lrm - qm)
