"""Discrete inequality evaluation: both sides, slack, verdict.

Every operation returns BoundReports with slack = lhs - rhs and a verdict
at relative tolerance slack >= -tol * max(1, |lhs|, |rhs|).  Lower bounds
put the functional on the lhs; upper bounds put the bound on the lhs, so
nonnegative slack always means "inequality holds".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import fsum
from typing import Sequence

import numpy as np

from .discrete import (
    DEFAULT_TERM_CAP,
    GroupedInstance,
    WeightVector,
    combo_values,
    csum,
    product_weights,
    weighted_mean,
)
from .functions import FunctionSpec

__all__ = [
    "BoundReport",
    "RatioExtrema",
    "HypothesisViolation",
    "DEFAULT_TOL",
    "lower_bound_superquadratic",
    "lambda_bound",
    "halved_bound",
    "ratio_extrema",
    "sandwich_bounds",
    "convex_sandwich",
    "chebychev_magnitude_bound",
    "jensen_upper_via_C",
]

DEFAULT_TOL = 1e-9


class HypothesisViolation(ValueError):
    """An inequality's stated hypothesis fails on the evaluation set."""


@dataclass(frozen=True)
class BoundReport:
    inequality_id: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    context: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "context": self.context,
        }


@dataclass(frozen=True)
class RatioExtrema:
    m: float
    M: float
    argmin: tuple[int, ...]
    argmax: tuple[int, ...]


def _report(iid: str, lhs: float, rhs: float, tol: float, **context) -> BoundReport:
    slack = lhs - rhs
    scale = max(1.0, abs(lhs), abs(rhs))
    return BoundReport(iid, lhs, rhs, slack, slack >= -tol * scale, context)


def _kernel(f: FunctionSpec, inst: GroupedInstance, cap: int):
    """Shared enumeration pieces: product weights, combo values, grand mean."""
    W = product_weights(inst.weight_arrays(), cap)
    S = combo_values(inst.node_arrays(), inst.q)
    f.require(S)
    xbar = weighted_mean(inst)
    f.require(xbar)
    return W, S, xbar


# ---------------------------------------------------------------------------
# superquadratic lower bounds

def lower_bound_superquadratic(f: FunctionSpec, inst: GroupedInstance,
                               tol: float = DEFAULT_TOL,
                               cap: int = DEFAULT_TERM_CAP) -> BoundReport:
    """J_k >= sum of product weights times f(|combo - xbar|)."""
    W, S, xbar = _kernel(f, inst, cap)
    dev = np.abs(S - xbar)
    f.require(dev)
    lhs = csum(W * f.f(S)) - float(f.f(np.asarray(xbar)))
    rhs = csum(W * f.f(dev))
    return _report("lower_bound_superquadratic", lhs, rhs, tol,
                   xbar=xbar, term_count=int(S.size))


def lambda_bound(f: FunctionSpec, p: WeightVector, x: Sequence[float],
                 lam: float, tol: float = DEFAULT_TOL) -> BoundReport:
    """Interpolated lower bound: move each node a fraction lam toward the mean."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    x_arr = np.asarray(x, dtype=float)
    if x_arr.size != len(p):
        raise ValueError("node count must match weight count")
    f.require(x_arr)
    w = p.array
    xbar = csum(w * x_arr)
    pts = (1.0 - lam) * xbar + lam * x_arr
    f.require(pts)
    dev = lam * np.abs(x_arr - xbar)
    f.require(dev)
    lhs = csum(w * f.f(pts)) - float(f.f(np.asarray(xbar)))
    rhs = csum(w * f.f(dev))
    return _report("lambda_bound", lhs, rhs, tol, xbar=xbar, lam=lam)


def halved_bound(f: FunctionSpec, inst: GroupedInstance,
                 tol: float = DEFAULT_TOL,
                 cap: int = DEFAULT_TERM_CAP) -> BoundReport:
    """J_k >= 2 * sum of product weights times f(half deviation); needs f >= 0."""
    W, S, xbar = _kernel(f, inst, cap)
    half_dev = 0.5 * np.abs(S - xbar)
    f.require(half_dev)
    fS = f.f(S)
    fbar = float(f.f(np.asarray(xbar)))
    fh = f.f(half_dev)
    if np.min(fS) < 0.0 or fbar < 0.0 or np.min(fh) < 0.0:
        raise HypothesisViolation(
            f"{f.name} is negative on the evaluation set; bound needs f >= 0"
        )
    lhs = csum(W * fS) - fbar
    rhs = 2.0 * csum(W * fh)
    return _report("halved_bound", lhs, rhs, tol,
                   xbar=xbar, term_count=int(S.size))


# ---------------------------------------------------------------------------
# weight-ratio sandwich

def _as_weight_arrays(groups) -> list[np.ndarray]:
    out = []
    for g in groups:
        out.append(g.array if isinstance(g, WeightVector) else np.asarray(g, dtype=float))
    return out


def ratio_extrema(p_groups, r_groups) -> RatioExtrema:
    """Exact min/max of the product weight ratio over all index tuples.

    The ratio factorizes over groups, so the extrema are products of
    per-group extrema; argmin/argmax give one attaining index per group.
    """
    p_arrs = _as_weight_arrays(p_groups)
    r_arrs = _as_weight_arrays(r_groups)
    if len(p_arrs) != len(r_arrs) or any(
        a.size != b.size for a, b in zip(p_arrs, r_arrs)
    ):
        raise ValueError("p and r weight systems must have identical shape")
    m, M = 1.0, 1.0
    argmin, argmax = [], []
    for a, b in zip(p_arrs, r_arrs):
        ratios = a / b
        i_lo = int(np.argmin(ratios))
        i_hi = int(np.argmax(ratios))
        m *= float(ratios[i_lo])
        M *= float(ratios[i_hi])
        argmin.append(i_lo)
        argmax.append(i_hi)
    return RatioExtrema(m, M, tuple(argmin), tuple(argmax))


def _with_weights(inst: GroupedInstance, r_groups) -> GroupedInstance:
    r_vecs = [
        g if isinstance(g, WeightVector) else WeightVector(tuple(g))
        for g in r_groups
    ]
    groups = tuple((r, x) for r, (_, x) in zip(r_vecs, inst.groups))
    return GroupedInstance(groups, inst.outer)


def sandwich_bounds(f: FunctionSpec, inst_p: GroupedInstance, r_groups,
                    tol: float = DEFAULT_TOL,
                    cap: int = DEFAULT_TERM_CAP) -> tuple[BoundReport, BoundReport]:
    """Two-sided control of J_k(p) by J_k(r) through the ratio extrema m, M.

    The lower report bounds J_k(p) - m J_k(r) from below, the upper report
    bounds M J_k(r) - J_k(p); the upper side measures deviations from the
    r-weighted grand mean.
    """
    inst_r = _with_weights(inst_p, r_groups)
    ext = ratio_extrema([p for p, _ in inst_p.groups],
                        [r for r, _ in inst_r.groups])
    m, M = ext.m, ext.M

    Wp, S, xbar_p = _kernel(f, inst_p, cap)
    Wr = product_weights(inst_r.weight_arrays(), cap)
    xbar_r = weighted_mean(inst_r)
    f.require(xbar_r)
    shift = abs(xbar_r - xbar_p)
    f.require(shift)
    dev_p = np.abs(S - xbar_p)
    dev_r = np.abs(S - xbar_r)
    f.require(dev_p)
    f.require(dev_r)

    fS = f.f(S)
    J_p = csum(Wp * fS) - float(f.f(np.asarray(xbar_p)))
    J_r = csum(Wr * fS) - float(f.f(np.asarray(xbar_r)))
    f_shift = float(f.f(np.asarray(shift)))

    lo = _report(
        "sandwich_lower",
        J_p - m * J_r,
        m * f_shift + csum((Wp - m * Wr) * f.f(dev_p)),
        tol,
        m=m, M=M, J_p=J_p, J_r=J_r, xbar_p=xbar_p, xbar_r=xbar_r,
    )
    hi = _report(
        "sandwich_upper",
        M * J_r - J_p,
        f_shift + csum((M * Wr - Wp) * f.f(dev_r)),
        tol,
        m=m, M=M, J_p=J_p, J_r=J_r, xbar_p=xbar_p, xbar_r=xbar_r,
    )
    return lo, hi


def _check_convex_on(f: FunctionSpec, pts: np.ndarray, tol: float) -> None:
    """Three-point convexity test on the sorted evaluation grid."""
    u = np.unique(pts)
    if u.size < 3:
        return
    fu = f.f(u)
    a, b, c = u[:-2], u[1:-1], u[2:]
    fa, fb, fc = fu[:-2], fu[1:-1], fu[2:]
    chord = ((c - b) * fa + (b - a) * fc) / (c - a)
    scale = max(1.0, float(np.max(np.abs(fu))))
    if np.max(fb - chord) > tol * scale:
        raise HypothesisViolation(
            f"{f.name} is not convex on the evaluation grid"
        )


def convex_sandwich(f: FunctionSpec, inst_p: GroupedInstance, r_groups,
                    tol: float = DEFAULT_TOL,
                    cap: int = DEFAULT_TERM_CAP) -> tuple[BoundReport, BoundReport]:
    """m J_k(r) <= J_k(p) <= M J_k(r) for convex f (checked on the grid)."""
    inst_r = _with_weights(inst_p, r_groups)
    ext = ratio_extrema([p for p, _ in inst_p.groups],
                        [r for r, _ in inst_r.groups])
    Wp, S, xbar_p = _kernel(f, inst_p, cap)
    xbar_r = weighted_mean(inst_r)
    f.require(xbar_r)
    _check_convex_on(f, np.concatenate([S, [xbar_p, xbar_r]]), tol)
    Wr = product_weights(inst_r.weight_arrays(), cap)
    fS = f.f(S)
    J_p = csum(Wp * fS) - float(f.f(np.asarray(xbar_p)))
    J_r = csum(Wr * fS) - float(f.f(np.asarray(xbar_r)))
    lo = _report("convex_sandwich_lower", J_p, ext.m * J_r, tol,
                 m=ext.m, M=ext.M, J_p=J_p, J_r=J_r)
    hi = _report("convex_sandwich_upper", ext.M * J_r, J_p, tol,
                 m=ext.m, M=ext.M, J_p=J_p, J_r=J_r)
    return lo, hi


# ---------------------------------------------------------------------------
# Chebychev magnitude and the slope-range upper bound

def _check_range(name: str, values: np.ndarray, lo: float, hi: float) -> None:
    vmin, vmax = float(np.min(values)), float(np.max(values))
    if vmin < lo or vmax > hi:
        raise HypothesisViolation(
            f"{name} ranges over [{vmin}, {vmax}], outside [{lo}, {hi}]"
        )


def chebychev_magnitude_bound(f: FunctionSpec, inst: GroupedInstance,
                              m_tilde: float, M_tilde: float,
                              tol: float = DEFAULT_TOL,
                              cap: int = DEFAULT_TERM_CAP) -> BoundReport:
    """|T_k| <= (M~ - m~)/2 * weighted mean absolute deviation of combos."""
    W, S, xbar = _kernel(f, inst, cap)
    fS = f.f(S)
    _check_range(f"f over {f.name} combos", fS, m_tilde, M_tilde)
    T = csum(W * (S - xbar) * fS)
    lhs = 0.5 * (M_tilde - m_tilde) * csum(W * np.abs(S - xbar))
    return _report("chebychev_magnitude", lhs, abs(T), tol,
                   T=T, m_tilde=m_tilde, M_tilde=M_tilde, xbar=xbar)


def jensen_upper_via_C(f: FunctionSpec, inst: GroupedInstance,
                       m_tilde: float, M_tilde: float,
                       tol: float = DEFAULT_TOL,
                       cap: int = DEFAULT_TERM_CAP) -> tuple[BoundReport, BoundReport]:
    """Upper-bound J_k through a range [m~, M~] for the companion slope.

    Returns the slope-range bound plus the intermediate link report
    J_k <= T_k(C) - sum of product weights times f(|combo - xbar|).
    """
    if f.C is None:
        raise ValueError(f"{f.name}: no companion slope evaluator")
    W, S, xbar = _kernel(f, inst, cap)
    CS = f.C(S)
    _check_range(f"C over {f.name} combos", np.asarray(CS), m_tilde, M_tilde)
    dev = np.abs(S - xbar)
    f.require(dev)
    f_dev_sum = csum(W * f.f(dev))
    J = csum(W * f.f(S)) - float(f.f(np.asarray(xbar)))
    primary = _report(
        "jensen_upper_via_C",
        csum(W * (0.5 * (M_tilde - m_tilde) * dev - f.f(dev))),
        J,
        tol,
        m_tilde=m_tilde, M_tilde=M_tilde, xbar=xbar,
    )
    T_C = csum(W * (S - xbar) * CS)
    link = _report("jensen_chebychev_link", T_C - f_dev_sum, J, tol,
                   T_C=T_C, xbar=xbar)
    return primary, link
