"""Randomized inequality campaigns with reproducible seeds.

Each trial is a deterministic function of (seed, trial_index): weights come
from the exponential-normalization simplex construction, nodes are uniform
in the configured range.  Hypothesis-violating draws are counted as skips,
never as failures.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bounds as bnd
from .bounds import BoundReport, HypothesisViolation
from .discrete import (
    EnumerationCapError,
    GroupedInstance,
    WeightVector,
)
from .functions import DomainError, FunctionSpec, function_from_id
from .integral import QuadratureSpec, density_from_id, lower_bound_superquadratic_int

__all__ = [
    "CampaignConfig",
    "CampaignReport",
    "random_instance",
    "run_campaign",
    "DEFAULT_INEQUALITY_IDS",
    "INEQUALITY_IDS",
]

EQUALITY_TOL = 1e-12

DEFAULT_INEQUALITY_IDS = (
    "lower_bound_superquadratic",
    "lambda_bound",
    "halved_bound",
    "sandwich",
    "chebychev_magnitude",
    "jensen_upper_via_C",
)

INEQUALITY_IDS = DEFAULT_INEQUALITY_IDS + (
    "convex_sandwich",
    "lower_bound_superquadratic_int",
)


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    trials: int = 1000
    k_range: tuple[int, int] = (1, 3)
    n_range: tuple[int, int] = (2, 5)
    node_range: tuple[float, float] = (0.0, 10.0)
    function_ids: tuple[str, ...] = ("power:2", "power:3", "power:4")
    inequality_ids: tuple[str, ...] = DEFAULT_INEQUALITY_IDS
    tolerance: float = 1e-9
    quad: QuadratureSpec = QuadratureSpec()

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.k_range[0] > self.k_range[1] or self.k_range[0] < 1:
            raise ValueError("bad k range")
        if self.n_range[0] > self.n_range[1] or self.n_range[0] < 1:
            raise ValueError("bad n range")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        unknown = set(self.inequality_ids) - set(INEQUALITY_IDS)
        if unknown:
            raise ValueError(f"unknown inequality ids: {sorted(unknown)}")

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        kw = dict(
            seed=int(d.get("seed", 0)),
            trials=int(d.get("trials", 1000)),
            k_range=tuple(d.get("k_range", (1, 3))),
            n_range=tuple(d.get("n_range", (2, 5))),
            node_range=tuple(d.get("node_range", (0.0, 10.0))),
            function_ids=tuple(d.get("function_ids", ("power:2",))),
            inequality_ids=tuple(d.get("inequality_ids", DEFAULT_INEQUALITY_IDS)),
            tolerance=float(d.get("tolerance", 1e-9)),
            quad=QuadratureSpec.from_config(d),
        )
        return cls(**kw)

    @classmethod
    def load(cls, path: str) -> "CampaignConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "k_range": list(self.k_range),
            "n_range": list(self.n_range),
            "node_range": list(self.node_range),
            "function_ids": list(self.function_ids),
            "inequality_ids": list(self.inequality_ids),
            "tolerance": self.tolerance,
            "quad.mode": self.quad.mode,
            "quad.nodes": self.quad.nodes_per_axis,
            "quad.samples": self.quad.sample_count,
            "quad.seed": self.quad.seed,
        }


def _simplex(rng: np.random.Generator, n: int) -> WeightVector:
    e = rng.exponential(size=n)
    return WeightVector(tuple(e / e.sum()))


def _draw(config: CampaignConfig, trial_index: int):
    """Deterministic trial draw: instance, alternate weights, lambda, density."""
    rng = np.random.default_rng([config.seed, trial_index])
    k = int(rng.integers(config.k_range[0], config.k_range[1] + 1))
    lo, hi = config.node_range
    groups = []
    r_groups = []
    for _ in range(k):
        n = int(rng.integers(config.n_range[0], config.n_range[1] + 1))
        p = _simplex(rng, n)
        x = tuple(rng.uniform(lo, hi, size=n).tolist())
        groups.append((p, x))
        r_groups.append(_simplex(rng, n))
    q = _simplex(rng, k) if k > 1 else WeightVector((1.0,))
    inst = GroupedInstance(tuple(groups), q)
    lam = float(rng.uniform())
    # integral side instrument: integer-exponent powerlaw on a sub-interval,
    # so the Gauss rule integrates it exactly
    alpha = int(rng.integers(0, 3))
    a = float(rng.uniform(max(lo, 0.0), max(lo, 0.0) + 0.25 * (hi - lo)))
    b = float(rng.uniform(a + 0.25 * (hi - lo), hi))
    return inst, r_groups, lam, (alpha, a, b)


def random_instance(config: CampaignConfig, trial_index: int) -> GroupedInstance:
    """The grouped instance evaluated at the given trial, reproducibly."""
    return _draw(config, trial_index)[0]


def _first_group(inst: GroupedInstance):
    p, x = inst.groups[0]
    return p, x


def _evaluate(iid: str, f: FunctionSpec, inst: GroupedInstance,
              r_groups, lam: float, dens, tol: float,
              quad: QuadratureSpec) -> list[BoundReport]:
    if iid == "lower_bound_superquadratic":
        return [bnd.lower_bound_superquadratic(f, inst, tol)]
    if iid == "lambda_bound":
        p, x = _first_group(inst)
        return [bnd.lambda_bound(f, p, x, lam, tol)]
    if iid == "halved_bound":
        return [bnd.halved_bound(f, inst, tol)]
    if iid == "sandwich":
        return list(bnd.sandwich_bounds(f, inst, r_groups, tol))
    if iid == "convex_sandwich":
        return list(bnd.convex_sandwich(f, inst, r_groups, tol))
    if iid == "chebychev_magnitude":
        from .discrete import combo_values

        S = combo_values(inst.node_arrays(), inst.q)
        fS = np.asarray(f.f(S))
        return [bnd.chebychev_magnitude_bound(
            f, inst, float(np.min(fS)), float(np.max(fS)), tol)]
    if iid == "jensen_upper_via_C":
        from .discrete import combo_values

        if f.C is None:
            raise HypothesisViolation(f"{f.name}: no companion slope")
        S = combo_values(inst.node_arrays(), inst.q)
        CS = np.asarray(f.C(S))
        return list(bnd.jensen_upper_via_C(
            f, inst, float(np.min(CS)), float(np.max(CS)), tol))
    if iid == "lower_bound_superquadratic_int":
        alpha, a, b = dens
        d = density_from_id(f"powerlaw:{alpha}", (a, b))
        return [lower_bound_superquadratic_int(f, [d], np.array([1.0]),
                                               quad, tol)]
    raise ValueError(f"unknown inequality id: {iid!r}")


@dataclass
class _Stats:
    count: int = 0
    violations: list = field(default_factory=list)
    equality_hits: int = 0
    slacks: list = field(default_factory=list)
    rhs_min: Optional[float] = None

    def record(self, rep: BoundReport, trial: int, fn_id: str,
               inst: GroupedInstance):
        self.count += 1
        self.slacks.append(rep.slack)
        scale = max(1.0, abs(rep.lhs), abs(rep.rhs))
        if abs(rep.slack) <= EQUALITY_TOL * scale:
            self.equality_hits += 1
        if self.rhs_min is None or rep.rhs < self.rhs_min:
            self.rhs_min = rep.rhs
        if not rep.holds:
            self.violations.append({
                "trial": trial,
                "function": fn_id,
                "lhs": rep.lhs,
                "rhs": rep.rhs,
                "slack": rep.slack,
                "instance": inst.to_dict(),
            })


@dataclass
class CampaignReport:
    config: CampaignConfig
    per_inequality: dict
    skips: dict
    slack_samples: dict = field(repr=False, default_factory=dict)

    @property
    def total_violations(self) -> int:
        return sum(len(v["violations"]) for v in self.per_inequality.values())

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "per_inequality": self.per_inequality,
            "skips": self.skips,
            "total_violations": self.total_violations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary_rows(self) -> list[dict]:
        rows = []
        for iid in sorted(self.per_inequality):
            st = self.per_inequality[iid]
            rows.append({"inequality_id": iid, **{
                k: st[k] for k in (
                    "count", "violation_count", "equality_hits",
                    "slack_min", "slack_p1", "slack_median", "rhs_min",
                )
            }})
        return rows


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """Evaluate every configured inequality on every trial and aggregate."""
    funcs = {fid: function_from_id(fid) for fid in config.function_ids}
    stats: dict[str, _Stats] = {}
    skips: dict[str, int] = {iid: 0 for iid in config.inequality_ids}

    for t in range(config.trials):
        inst, r_groups, lam, dens = _draw(config, t)
        for fid, f in funcs.items():
            for iid in config.inequality_ids:
                try:
                    reports = _evaluate(iid, f, inst, r_groups, lam, dens,
                                        config.tolerance, config.quad)
                except (HypothesisViolation, DomainError,
                        EnumerationCapError):
                    skips[iid] += 1
                    continue
                for rep in reports:
                    stats.setdefault(rep.inequality_id, _Stats()).record(
                        rep, t, fid, inst)

    per_inequality = {}
    samples = {}
    for iid, st in stats.items():
        s = np.asarray(st.slacks)
        per_inequality[iid] = {
            "count": st.count,
            "violation_count": len(st.violations),
            "violations": st.violations,
            "equality_hits": st.equality_hits,
            "slack_min": float(np.min(s)),
            "slack_p1": float(np.quantile(s, 0.01)),
            "slack_median": float(np.median(s)),
            "rhs_min": st.rhs_min,
        }
        samples[iid] = s
    return CampaignReport(config, per_inequality, skips, samples)
