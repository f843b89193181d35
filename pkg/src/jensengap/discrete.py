"""Discrete Jensen and Chebychev functionals, plain and k-fold.

The k-fold forms enumerate the full product index space (odometer order =
C order of the outer-product arrays) and accumulate with compensated
summation.  Exceeding the term cap is an error, never silent sampling.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import fsum
from typing import Optional, Sequence

import numpy as np

from .functions import FunctionSpec

__all__ = [
    "WeightVector",
    "GroupedInstance",
    "FunctionalValue",
    "EnumerationCapError",
    "weighted_mean",
    "jensen",
    "chebychev",
    "jensen_k",
    "chebychev_k",
    "product_weights",
    "combo_values",
    "load_instance",
    "DEFAULT_TERM_CAP",
    "WEIGHT_TOL",
]

WEIGHT_TOL = 1e-12
DEFAULT_TERM_CAP = 10 ** 7


class EnumerationCapError(RuntimeError):
    """Product index space larger than the configured cap."""


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive weights summing to 1 (renormalized within 1e-12)."""

    entries: tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.entries, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must form a nonempty 1-D sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights must be finite and strictly positive")
        s = fsum(w.tolist())
        if abs(s - 1.0) > WEIGHT_TOL:
            raise ValueError(
                f"weights sum to {s!r}; must be 1 within {WEIGHT_TOL}"
            )
        object.__setattr__(
            self, "entries", tuple(float(v) / s for v in w.tolist())
        )

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries)


@dataclass(frozen=True)
class GroupedInstance:
    """k groups of (weights, nodes) mixed by outer weights q."""

    groups: tuple[tuple[WeightVector, tuple[float, ...]], ...]
    outer: WeightVector

    def __post_init__(self):
        if len(self.groups) < 1:
            raise ValueError("need at least one group")
        if len(self.outer) != len(self.groups):
            raise ValueError("outer weight length must equal group count")
        norm = []
        for p, x in self.groups:
            x_arr = np.asarray(x, dtype=float)
            if x_arr.ndim != 1 or x_arr.size != len(p):
                raise ValueError("node count must match weight count")
            if not np.all(np.isfinite(x_arr)) or np.any(x_arr < 0.0):
                raise ValueError("nodes must be finite and nonnegative")
            norm.append((p, tuple(x_arr.tolist())))
        object.__setattr__(self, "groups", tuple(norm))

    @property
    def k(self) -> int:
        return len(self.groups)

    @property
    def term_count(self) -> int:
        n = 1
        for p, _ in self.groups:
            n *= len(p)
        return n

    @property
    def q(self) -> np.ndarray:
        return self.outer.array

    def weight_arrays(self) -> list[np.ndarray]:
        return [p.array for p, _ in self.groups]

    def node_arrays(self) -> list[np.ndarray]:
        return [np.asarray(x) for _, x in self.groups]

    @classmethod
    def single(cls, p: WeightVector, x: Sequence[float]) -> "GroupedInstance":
        """The classical k=1 instance."""
        return cls(((p, tuple(x)),), WeightVector((1.0,)))

    @classmethod
    def from_dict(cls, d: dict) -> "GroupedInstance":
        groups = tuple(
            (WeightVector(tuple(g["p"])), tuple(g["x"])) for g in d["groups"]
        )
        return cls(groups, WeightVector(tuple(d["q"])))

    def to_dict(self) -> dict:
        return {
            "q": list(self.outer.entries),
            "groups": [
                {"p": list(p.entries), "x": list(x)} for p, x in self.groups
            ],
        }


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    term_count: int
    xbar: float
    stderr: Optional[float] = None


def load_instance(path: str) -> GroupedInstance:
    with open(path) as fh:
        return GroupedInstance.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# enumeration kernels (shared with the bounds module)

def product_weights(weight_arrays: Sequence[np.ndarray],
                    cap: int = DEFAULT_TERM_CAP) -> np.ndarray:
    """Raveled outer product of per-group weights, capped."""
    count = 1
    for w in weight_arrays:
        count *= w.size
    if count > cap:
        raise EnumerationCapError(
            f"{count} product terms exceed the cap of {cap}"
        )
    out = weight_arrays[0]
    for w in weight_arrays[1:]:
        out = np.multiply.outer(out, w)
    return out.reshape(-1)


def combo_values(node_arrays: Sequence[np.ndarray], q: np.ndarray) -> np.ndarray:
    """All values sum_i q_i x_{i, j_i} over the product index space, raveled."""
    k = len(node_arrays)
    total = np.zeros((1,) * k)
    for i, x in enumerate(node_arrays):
        shape = [1] * k
        shape[i] = x.size
        total = total + q[i] * x.reshape(shape)
    return total.reshape(-1)


def csum(values: np.ndarray) -> float:
    """Compensated sum of a numpy vector."""
    return fsum(values.tolist())


# ---------------------------------------------------------------------------
# functionals

def weighted_mean(inst: GroupedInstance) -> float:
    """Grand mean sum_i q_i sum_j p_ij x_ij."""
    q = inst.q
    return fsum(
        q[i] * csum(p.array * np.asarray(x))
        for i, (p, x) in enumerate(inst.groups)
    )


def jensen(f: FunctionSpec, p: WeightVector, x: Sequence[float]) -> FunctionalValue:
    """Classical Jensen gap: sum p_i f(x_i) - f(sum p_i x_i)."""
    x_arr = np.asarray(x, dtype=float)
    if x_arr.size != len(p):
        raise ValueError("node count must match weight count")
    f.require(x_arr)
    xbar = csum(p.array * x_arr)
    f.require(xbar)
    value = csum(p.array * f.f(x_arr)) - float(f.f(np.asarray(xbar)))
    return FunctionalValue(value, x_arr.size, xbar)


def chebychev(f: FunctionSpec, p: WeightVector, x: Sequence[float]) -> FunctionalValue:
    """Weighted covariance of x and f(x): sum p_i (x_i - xbar) f(x_i)."""
    x_arr = np.asarray(x, dtype=float)
    if x_arr.size != len(p):
        raise ValueError("node count must match weight count")
    f.require(x_arr)
    xbar = csum(p.array * x_arr)
    value = csum(p.array * (x_arr - xbar) * f.f(x_arr))
    return FunctionalValue(value, x_arr.size, xbar)


def jensen_k(f: FunctionSpec, inst: GroupedInstance,
             cap: int = DEFAULT_TERM_CAP) -> FunctionalValue:
    """k-fold Jensen gap by exact enumeration of the product index space."""
    W = product_weights(inst.weight_arrays(), cap)
    S = combo_values(inst.node_arrays(), inst.q)
    f.require(S)
    xbar = weighted_mean(inst)
    f.require(xbar)
    value = csum(W * f.f(S)) - float(f.f(np.asarray(xbar)))
    return FunctionalValue(value, S.size, xbar)


def chebychev_k(f: FunctionSpec, inst: GroupedInstance,
                cap: int = DEFAULT_TERM_CAP) -> FunctionalValue:
    """k-fold Chebychev functional by exact enumeration."""
    W = product_weights(inst.weight_arrays(), cap)
    S = combo_values(inst.node_arrays(), inst.q)
    f.require(S)
    xbar = weighted_mean(inst)
    value = csum(W * (S - xbar) * f.f(S))
    return FunctionalValue(value, S.size, xbar)
