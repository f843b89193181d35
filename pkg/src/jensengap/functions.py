"""Superquadratic candidate functions and grid-based certification.

A function f on [0, a] or [0, inf) is superquadratic when for each x there
is a slope C(x) with  f(y) - f(x) >= f(|y-x|) + C(x)(y-x)  for all y in the
domain.  This module holds the built-in catalog (with closed-form C where
known), the feasible-slope envelope, and a grid certifier.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "DomainError",
    "FunctionSpec",
    "CertificationReport",
    "eval_f",
    "eval_C",
    "feasible_C_envelope",
    "certify_superquadratic",
    "function_from_id",
    "load_tabulated",
    "CATALOG_IDS",
]


class DomainError(ValueError):
    """Argument lies outside the declared [0, a] / [0, inf) domain."""


@dataclass(frozen=True)
class FunctionSpec:
    """A candidate function with optional companion slope evaluator.

    ``f`` and ``C`` must accept numpy arrays.  The domain is [0, upper];
    ``upper = math.inf`` means the right-open half line.
    """

    name: str
    f: Callable[[np.ndarray], np.ndarray]
    upper: float = math.inf
    C: Optional[Callable[[np.ndarray], np.ndarray]] = None
    claims_superquadratic: bool = False

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= 0.0) and np.all(x <= self.upper))

    def require(self, x) -> None:
        if not self.contains(x):
            raise DomainError(
                f"{self.name}: argument outside [0, {self.upper}]"
            )


@dataclass(frozen=True)
class CertificationReport:
    verdict: str  # "certified" | "violated" | "inconclusive"
    worst_violation: float
    witness: tuple[float, float]
    envelope_gap: float
    tolerance_abs: float

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"


def eval_f(spec: FunctionSpec, x):
    """Evaluate f at x (scalar or array), enforcing the domain."""
    spec.require(x)
    out = spec.f(np.asarray(x, dtype=float))
    return float(out) if np.ndim(x) == 0 else out


def eval_C(spec: FunctionSpec, x):
    """Evaluate the companion slope C at x; error if none is attached."""
    if spec.C is None:
        raise ValueError(f"{spec.name}: no companion slope evaluator")
    spec.require(x)
    out = spec.C(np.asarray(x, dtype=float))
    return float(out) if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# catalog

def _power(p: float) -> FunctionSpec:
    def f(x):
        return x ** p

    def C(x):
        return p * x ** (p - 1.0)

    return FunctionSpec(f"power:{p:g}", f, C=C, claims_superquadratic=p >= 2)


def _xsqlog_f(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    return np.where(x > 0.0, x * x * np.log(safe), 0.0)


def _xsqlog_C(x):
    # continuous extension: C(0) = lim x(2 log x + 1) = 0
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    return np.where(x > 0.0, x * (2.0 * np.log(safe) + 1.0), 0.0)


def _neg_power_comp(p: float) -> FunctionSpec:
    def f(x):
        return -((1.0 + x ** (1.0 / p)) ** p)

    def C(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return FunctionSpec(
        f"neg_power_comp:{p:g}", f, C=C, claims_superquadratic=p > 0
    )


def function_from_id(fn_id: str) -> FunctionSpec:
    """Resolve a catalog id: power:<p>, xsqlog, neg_power_comp:<p>, exp, identity."""
    head, _, arg = fn_id.partition(":")
    if head == "power":
        return _power(float(arg))
    if head == "xsqlog":
        return FunctionSpec("xsqlog", _xsqlog_f, C=_xsqlog_C,
                            claims_superquadratic=True)
    if head == "neg_power_comp":
        return _neg_power_comp(float(arg))
    if head == "exp":
        return FunctionSpec("exp", np.exp)
    if head == "identity":
        return FunctionSpec("identity", lambda x: np.asarray(x, dtype=float))
    raise ValueError(f"unknown function id: {fn_id!r}")


CATALOG_IDS = ("power:<p>", "xsqlog", "neg_power_comp:<p>", "exp", "identity")


def load_tabulated(path: str, name: Optional[str] = None) -> FunctionSpec:
    """Load a user function from a CSV of (x, f) samples, piecewise linear.

    The first column must start at exactly 0 and be strictly increasing.
    A single header row is tolerated.
    """
    xs: list[float] = []
    fs: list[float] = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError:
                if not xs:  # header row
                    continue
                raise
            xs.append(x)
            fs.append(y)
    if len(xs) < 2:
        raise ValueError(f"{path}: need at least two samples")
    x_arr = np.asarray(xs)
    f_arr = np.asarray(fs)
    if x_arr[0] != 0.0:
        raise DomainError(f"{path}: domain must start at 0, got {x_arr[0]}")
    if np.any(np.diff(x_arr) <= 0):
        raise ValueError(f"{path}: x column must be strictly increasing")

    def f(t):
        return np.interp(t, x_arr, f_arr)

    return FunctionSpec(name or f"tabulated:{path}", f, upper=float(x_arr[-1]))


# ---------------------------------------------------------------------------
# envelope and certification

def feasible_C_envelope(spec: FunctionSpec, x: float, y_grid) -> tuple[float, float]:
    """Feasible interval (lower_C, upper_C) for the slope at x against y_grid.

    y > x constrains from above, y < x from below; an empty side leaves the
    bound infinite.  The interval is nonempty iff some slope satisfies the
    defining inequality at every grid point.
    """
    spec.require(x)
    y = np.asarray(y_grid, dtype=float)
    spec.require(y)
    fx = float(spec.f(np.asarray(x, dtype=float)))
    d = y - x
    mask = d != 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        quot = (spec.f(y) - fx - spec.f(np.abs(d))) / d
    above = quot[mask & (d > 0)]
    below = quot[mask & (d < 0)]
    upper = float(np.min(above)) if above.size else math.inf
    lower = float(np.max(below)) if below.size else -math.inf
    return lower, upper


def _canonical_slopes(spec: FunctionSpec, x_grid, y_grid) -> np.ndarray:
    """Pick one slope per x: the attached C, else a point in the envelope."""
    if spec.C is not None:
        return np.asarray(spec.C(np.asarray(x_grid, dtype=float)), dtype=float)
    out = np.empty(len(x_grid))
    for i, x in enumerate(x_grid):
        lo, hi = feasible_C_envelope(spec, float(x), y_grid)
        if math.isfinite(lo) and math.isfinite(hi):
            out[i] = 0.5 * (lo + hi)
        elif math.isfinite(hi):
            out[i] = hi
        elif math.isfinite(lo):
            out[i] = lo
        else:
            out[i] = 0.0
    return out


def certify_superquadratic(spec: FunctionSpec, x_grid, y_grid,
                           tolerance: float = 1e-9) -> CertificationReport:
    """Check the defining inequality on the grid product x_grid x y_grid.

    The verdict only certifies behaviour on the grid.  Grids with fewer
    than 3 points per axis yield "inconclusive".  The violation tolerance
    is relative: tolerance * max(1, max |f| over the grids).
    """
    x_arr = np.asarray(x_grid, dtype=float)
    y_arr = np.asarray(y_grid, dtype=float)
    if x_arr.size == 0 or y_arr.size == 0:
        raise ValueError("empty certification grid")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    spec.require(x_arr)
    spec.require(y_arr)

    fx = spec.f(x_arr)
    fy = spec.f(y_arr)
    scale = max(1.0, float(np.max(np.abs(fx))), float(np.max(np.abs(fy))))
    tol_abs = tolerance * scale

    slopes = _canonical_slopes(spec, x_arr, y_arr)
    D = y_arr[None, :] - x_arr[:, None]
    viol = spec.f(np.abs(D)) + slopes[:, None] * D - fy[None, :] + fx[:, None]
    i, j = np.unravel_index(int(np.argmax(viol)), viol.shape)
    worst = float(viol[i, j])
    witness = (float(x_arr[i]), float(y_arr[j]))

    gaps = []
    for x in x_arr:
        lo, hi = feasible_C_envelope(spec, float(x), y_arr)
        gaps.append(hi - lo)
    envelope_gap = float(min(gaps))

    if x_arr.size < 3 or y_arr.size < 3:
        verdict = "inconclusive"
    elif worst > tol_abs:
        verdict = "violated"
    else:
        verdict = "certified"
    return CertificationReport(verdict, worst, witness, envelope_gap, tol_abs)
