"""Integral analogues over [a, b]^k: densities, quadrature, and bounds.

Tensor mode uses a product Gauss-Legendre rule (k <= 4); Monte Carlo mode
draws independent samples per axis by inverse-CDF.  Signed product
measures arising in the sandwich bounds are expanded into 2^k signed
product terms, each integrated by the base quadrature.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bounds import BoundReport, DEFAULT_TOL, HypothesisViolation, _report
from .discrete import FunctionalValue, WeightVector, combo_values, csum, product_weights
from .functions import FunctionSpec

__all__ = [
    "DensitySpec",
    "QuadratureSpec",
    "IntegralRatioExtrema",
    "density_from_id",
    "load_tabulated_density",
    "integral_mean",
    "jensen_k_int",
    "chebychev_k_int",
    "lower_bound_superquadratic_int",
    "ratio_extrema_int",
    "sandwich_bounds_int",
    "chebychev_magnitude_bound_int",
    "jensen_upper_via_C_int",
]

VALIDATION_GRID = 1024
DEFAULT_MASS_TOL = 1e-8
_MASS_CHECK_NODES = 128
_CDF_GRID = 8192


@dataclass(frozen=True)
class DensitySpec:
    """A positive density with unit mass on [a, b], 0 <= a < b.

    ``antiderivative`` is the cumulative mass from a, used for analytic
    inverse-CDF sampling and for the subinterval ratio extrema; when
    absent a dense trapezoid table stands in.
    """

    name: str
    pdf: Callable[[np.ndarray], np.ndarray]
    interval: tuple[float, float]
    antiderivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    mass_tolerance: float = DEFAULT_MASS_TOL

    def __post_init__(self):
        a, b = self.interval
        if not (0.0 <= a < b) or not math.isfinite(b):
            raise ValueError(f"{self.name}: interval must satisfy 0 <= a < b")
        # open interior: endpoint zeros (e.g. density ~ x at a=0) are fine
        grid = np.linspace(a, b, VALIDATION_GRID + 2)[1:-1]
        vals = np.asarray(self.pdf(grid))
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
            raise ValueError(f"{self.name}: density must be positive on [a, b]")
        x, w = gauss_rule(_MASS_CHECK_NODES, a, b)
        mass = csum(w * np.asarray(self.pdf(x)))
        if abs(mass - 1.0) > self.mass_tolerance:
            raise ValueError(
                f"{self.name}: mass {mass!r} differs from 1 beyond "
                f"{self.mass_tolerance}"
            )


@dataclass(frozen=True)
class QuadratureSpec:
    mode: str = "tensor_gauss"  # or "monte_carlo"
    nodes_per_axis: int = 16
    sample_count: int = 10 ** 5
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("tensor_gauss", "monte_carlo"):
            raise ValueError(f"unknown quadrature mode {self.mode!r}")
        if self.mode == "monte_carlo" and self.sample_count < 10 ** 3:
            raise ValueError("Monte Carlo needs at least 1000 samples")
        if self.mode == "tensor_gauss" and self.nodes_per_axis < 1:
            raise ValueError("need at least one node per axis")

    @classmethod
    def from_config(cls, cfg: dict) -> "QuadratureSpec":
        """Build from flat config keys quad.mode / quad.nodes / quad.samples / quad.seed."""
        return cls(
            mode=cfg.get("quad.mode", "tensor_gauss"),
            nodes_per_axis=int(cfg.get("quad.nodes", 16)),
            sample_count=int(cfg.get("quad.samples", 10 ** 5)),
            seed=int(cfg.get("quad.seed", 0)),
        )


@dataclass(frozen=True)
class IntegralRatioExtrema:
    m: float
    M: float  # math.inf when the pointwise ratio is unbounded on the grid
    arg_m: tuple[float, float]
    arg_M: tuple[float, float]
    m_from_limit: bool
    M_from_limit: bool

    @property
    def M_finite(self) -> bool:
        return math.isfinite(self.M)


# ---------------------------------------------------------------------------
# density catalog

def _powerlaw(alpha: float, a: float, b: float) -> DensitySpec:
    if alpha == -1.0:
        raise ValueError("powerlaw exponent -1 not supported")
    norm = (alpha + 1.0) / (b ** (alpha + 1.0) - a ** (alpha + 1.0))

    def pdf(x):
        return norm * np.asarray(x, dtype=float) ** alpha

    def cmass(x):
        x = np.asarray(x, dtype=float)
        return norm / (alpha + 1.0) * (x ** (alpha + 1.0) - a ** (alpha + 1.0))

    name = {0.0: "uniform", 1.0: "linear"}.get(alpha, f"powerlaw:{alpha:g}")
    return DensitySpec(name, pdf, (a, b), antiderivative=cmass)


def density_from_id(density_id: str, interval: tuple[float, float]) -> DensitySpec:
    """Resolve "uniform", "linear", "powerlaw:<alpha>" on the given interval."""
    a, b = float(interval[0]), float(interval[1])
    head, _, arg = density_id.partition(":")
    if head == "uniform":
        return _powerlaw(0.0, a, b)
    if head == "linear":
        # density proportional to x, normalized on [a, b]
        return _powerlaw(1.0, a, b)
    if head == "powerlaw":
        return _powerlaw(float(arg), a, b)
    raise ValueError(f"unknown density id: {density_id!r}")


def load_tabulated_density(path: str, name: Optional[str] = None) -> DensitySpec:
    """Tabulated (x, density) CSV, trapezoid-normalized to unit mass."""
    import csv as _csv

    xs, ds = [], []
    with open(path, newline="") as fh:
        for row in _csv.reader(fh):
            if not row:
                continue
            try:
                xs.append(float(row[0]))
                ds.append(float(row[1]))
            except ValueError:
                if xs:
                    raise
    x_arr = np.asarray(xs)
    d_arr = np.asarray(ds)
    if x_arr.size < 2 or np.any(np.diff(x_arr) <= 0):
        raise ValueError(f"{path}: need strictly increasing x samples")
    mass = float(np.sum(0.5 * (d_arr[1:] + d_arr[:-1]) * np.diff(x_arr)))
    d_arr = d_arr / mass

    def pdf(t):
        return np.interp(t, x_arr, d_arr)

    return DensitySpec(name or f"tabulated:{path}", pdf,
                       (float(x_arr[0]), float(x_arr[-1])))


# ---------------------------------------------------------------------------
# quadrature plumbing

def gauss_rule(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def _common_interval(densities: Sequence[DensitySpec]) -> tuple[float, float]:
    iv = densities[0].interval
    if any(d.interval != iv for d in densities):
        raise ValueError("all densities must share one interval")
    return iv


def cumulative_mass(d: DensitySpec) -> Callable[[np.ndarray], np.ndarray]:
    """Cumulative mass from a; analytic if available, else a trapezoid table."""
    if d.antiderivative is not None:
        return lambda x: np.asarray(d.antiderivative(np.asarray(x, dtype=float)))
    a, b = d.interval
    grid = np.linspace(a, b, _CDF_GRID + 1)
    vals = np.asarray(d.pdf(grid))
    cdf = np.concatenate(
        [[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(grid))]
    )
    return lambda x: np.interp(x, grid, cdf)


def _inverse_cdf(d: DensitySpec, u: np.ndarray) -> np.ndarray:
    a, b = d.interval
    grid = np.linspace(a, b, _CDF_GRID + 1)
    cdf = np.asarray(cumulative_mass(d)(grid))
    cdf = cdf / cdf[-1]
    return np.interp(u, cdf, grid)


def _mc_samples(densities: Sequence[DensitySpec], quad: QuadratureSpec,
                seed_stream: int = 0) -> np.ndarray:
    """(sample_count, k) matrix of independent draws, one axis per column."""
    rng = np.random.default_rng([quad.seed, seed_stream])
    cols = [
        _inverse_cdf(d, rng.random(quad.sample_count)) for d in densities
    ]
    return np.column_stack(cols)


def _integrate_product(g: Callable[[np.ndarray], np.ndarray],
                       densities: Sequence[DensitySpec],
                       q: np.ndarray, quad: QuadratureSpec,
                       seed_stream: int = 0) -> float:
    """Integral of g(sum q_i x_i) against the product of the densities."""
    k = len(densities)
    if quad.mode == "tensor_gauss":
        if k > 4:
            raise ValueError("tensor quadrature limited to k <= 4")
        a, b = _common_interval(densities)
        x, w = gauss_rule(quad.nodes_per_axis, a, b)
        axis_w = [w * np.asarray(d.pdf(x)) for d in densities]
        W = product_weights(axis_w, cap=10 ** 8)
        S = combo_values([x] * k, q)
        return csum(W * np.asarray(g(S)))
    X = _mc_samples(densities, quad, seed_stream)
    return float(np.mean(np.asarray(g(X @ q))))


def _axis_mean(d: DensitySpec, nodes: int) -> float:
    a, b = d.interval
    x, w = gauss_rule(nodes, a, b)
    return csum(w * x * np.asarray(d.pdf(x)))


def _mean_nodes(quad: QuadratureSpec) -> int:
    return quad.nodes_per_axis if quad.mode == "tensor_gauss" else 128


def _as_q(q) -> np.ndarray:
    return q.array if isinstance(q, WeightVector) else np.asarray(q, dtype=float)


# ---------------------------------------------------------------------------
# functionals

def integral_mean(densities: Sequence[DensitySpec], q,
                  quad: QuadratureSpec) -> float:
    """Grand mean sum_i q_i * first moment of density i (1-D quadrature per axis)."""
    q = _as_q(q)
    if q.size != len(densities):
        raise ValueError("outer weight length must match density count")
    _common_interval(densities)
    n = _mean_nodes(quad)
    return fsum_like(q[i] * _axis_mean(d, n) for i, d in enumerate(densities))


def fsum_like(it) -> float:
    return math.fsum(it)


def jensen_k_int(f: FunctionSpec, densities: Sequence[DensitySpec], q,
                 quad: QuadratureSpec) -> FunctionalValue:
    """Integral k-fold Jensen gap under the chosen quadrature."""
    q = _as_q(q)
    xbar = integral_mean(densities, q, quad)
    f.require(xbar)
    fbar = float(f.f(np.asarray(xbar)))
    k = len(densities)
    if quad.mode == "tensor_gauss":
        value = _integrate_product(f.f, densities, q, quad) - fbar
        return FunctionalValue(value, quad.nodes_per_axis ** k, xbar)
    X = _mc_samples(densities, quad)
    fS = np.asarray(f.f(X @ q))
    value = float(np.mean(fS)) - fbar
    stderr = float(np.std(fS, ddof=1) / math.sqrt(fS.size))
    return FunctionalValue(value, fS.size, xbar, stderr)


def chebychev_k_int(f: FunctionSpec, densities: Sequence[DensitySpec], q,
                    quad: QuadratureSpec) -> FunctionalValue:
    """Integral k-fold Chebychev functional."""
    q = _as_q(q)
    xbar = integral_mean(densities, q, quad)

    def g(s):
        return (s - xbar) * np.asarray(f.f(s))

    k = len(densities)
    if quad.mode == "tensor_gauss":
        value = _integrate_product(g, densities, q, quad)
        return FunctionalValue(value, quad.nodes_per_axis ** k, xbar)
    X = _mc_samples(densities, quad)
    vals = g(X @ q)
    value = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(vals.size))
    return FunctionalValue(value, vals.size, xbar, stderr)


# ---------------------------------------------------------------------------
# bounds

def lower_bound_superquadratic_int(f: FunctionSpec,
                                   densities: Sequence[DensitySpec], q,
                                   quad: QuadratureSpec,
                                   tol: float = DEFAULT_TOL) -> BoundReport:
    """Integral analogue of the superquadratic lower bound."""
    q = _as_q(q)
    xbar = integral_mean(densities, q, quad)
    f.require(xbar)
    lhs = jensen_k_int(f, densities, q, quad).value
    rhs = _integrate_product(lambda s: f.f(np.abs(s - xbar)),
                             densities, q, quad)
    return _report("lower_bound_superquadratic_int", lhs, rhs, tol, xbar=xbar)


def ratio_extrema_int(p_densities: Sequence[DensitySpec],
                      r_densities: Sequence[DensitySpec],
                      grid_resolution: int = 256) -> IntegralRatioExtrema:
    """Extrema of the subinterval mass-product ratio over t < s grid pairs.

    The ratio factorizes through the cumulative masses, so the search is
    O(k * resolution^2).  Pointwise s -> t limits (the density ratios at
    grid points) are included; an unbounded pointwise ratio flags M as
    infinite and the M-side inequality is skipped downstream.
    """
    if len(p_densities) != len(r_densities):
        raise ValueError("need equally many p and r densities")
    a, b = _common_interval(list(p_densities) + list(r_densities))
    grid = np.linspace(a, b, grid_resolution + 1)

    num = np.ones((grid.size, grid.size))
    den = np.ones_like(num)
    point = np.ones(grid.size)
    for p, r in zip(p_densities, r_densities):
        P = np.asarray(cumulative_mass(p)(grid))
        R = np.asarray(cumulative_mass(r)(grid))
        num = num * (P[None, :] - P[:, None])
        den = den * (R[None, :] - R[:, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            point = point * np.asarray(p.pdf(grid)) / np.asarray(r.pdf(grid))
    ti, si = np.triu_indices(grid.size, k=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = num[ti, si] / den[ti, si]

    cand_vals = np.concatenate([ratios, point])
    cand_args = [(float(grid[t]), float(grid[s])) for t, s in zip(ti, si)]
    cand_args += [(float(t), float(t)) for t in grid]
    is_limit = np.concatenate(
        [np.zeros(ratios.size, dtype=bool), np.ones(point.size, dtype=bool)]
    )

    finite = np.isfinite(cand_vals)
    i_min = int(np.argmin(np.where(finite, cand_vals, math.inf)))
    m = float(cand_vals[i_min])
    if np.all(finite):
        i_max = int(np.argmax(cand_vals))
        M = float(cand_vals[i_max])
        M_arg, M_lim = cand_args[i_max], bool(is_limit[i_max])
    else:
        i_max = int(np.argmax(~finite))
        M, M_arg, M_lim = math.inf, cand_args[i_max], bool(is_limit[i_max])
    return IntegralRatioExtrema(m, M, cand_args[i_min], M_arg,
                                bool(is_limit[i_min]), M_lim)


def _signed_product_integral(g: Callable[[np.ndarray], np.ndarray],
                             axis_terms: Sequence[Sequence[tuple[float, DensitySpec]]],
                             q: np.ndarray, quad: QuadratureSpec) -> float:
    """Integrate g against a product of signed per-axis combinations.

    Each axis contributes coef1*d1 + coef2*d2; the product expands into
    2^k signed probability-product terms, each handled by the base rule.
    """
    total = 0.0
    for idx, choice in enumerate(itertools.product(*axis_terms)):
        coef = 1.0
        dens = []
        for c, d in choice:
            coef *= c
            dens.append(d)
        if coef == 0.0:
            continue
        total += coef * _integrate_product(g, dens, q, quad, seed_stream=idx + 1)
    return total


def sandwich_bounds_int(f: FunctionSpec,
                        p_densities: Sequence[DensitySpec],
                        r_densities: Sequence[DensitySpec], q,
                        quad: QuadratureSpec,
                        grid_resolution: int = 256,
                        tol: float = DEFAULT_TOL,
                        ) -> tuple[BoundReport, Optional[BoundReport]]:
    """Integral sandwich through subinterval ratio extrema.

    The second report is None when M is unbounded on the search grid.
    """
    q = _as_q(q)
    ext = ratio_extrema_int(p_densities, r_densities, grid_resolution)
    m, M = ext.m, ext.M
    n = _mean_nodes(quad)
    xbar_p = fsum_like(q[i] * _axis_mean(d, n) for i, d in enumerate(p_densities))
    xbar_r = fsum_like(q[i] * _axis_mean(d, n) for i, d in enumerate(r_densities))
    f.require(xbar_p)
    f.require(xbar_r)
    shift = abs(xbar_p - xbar_r)
    f.require(shift)
    f_shift = float(f.f(np.asarray(shift)))

    J_p = jensen_k_int(f, p_densities, q, quad).value
    J_r = jensen_k_int(f, r_densities, q, quad).value

    def g_p(s):
        return f.f(np.abs(s - xbar_p))

    def g_r(s):
        return f.f(np.abs(s - xbar_r))

    terms_lo = [[(1.0, p), (-m, r)] for p, r in zip(p_densities, r_densities)]
    lo = _report(
        "sandwich_lower_int",
        J_p - m * J_r,
        m * f_shift + _signed_product_integral(g_p, terms_lo, q, quad),
        tol,
        m=m, M=(M if math.isfinite(M) else "inf"),
        J_p=J_p, J_r=J_r, xbar_p=xbar_p, xbar_r=xbar_r,
    )
    if not ext.M_finite:
        return lo, None
    terms_hi = [[(M, r), (-1.0, p)] for p, r in zip(p_densities, r_densities)]
    hi = _report(
        "sandwich_upper_int",
        M * J_r - J_p,
        f_shift + _signed_product_integral(g_r, terms_hi, q, quad),
        tol,
        m=m, M=M, J_p=J_p, J_r=J_r, xbar_p=xbar_p, xbar_r=xbar_r,
    )
    return lo, hi


def _nodes_or_samples(densities, q, quad) -> np.ndarray:
    """Combo values reachable by the chosen rule, for hypothesis checks."""
    k = len(densities)
    if quad.mode == "tensor_gauss":
        a, b = _common_interval(densities)
        x, _ = gauss_rule(quad.nodes_per_axis, a, b)
        return combo_values([x] * k, q)
    return _mc_samples(densities, quad) @ q


def chebychev_magnitude_bound_int(f: FunctionSpec,
                                  densities: Sequence[DensitySpec], q,
                                  quad: QuadratureSpec,
                                  m_tilde: float, M_tilde: float,
                                  tol: float = DEFAULT_TOL) -> BoundReport:
    """|T_k| <= (M~ - m~)/2 times the mean absolute combo deviation."""
    q = _as_q(q)
    S = _nodes_or_samples(densities, q, quad)
    fS = np.asarray(f.f(S))
    if float(np.min(fS)) < m_tilde or float(np.max(fS)) > M_tilde:
        raise HypothesisViolation(
            f"f over quadrature nodes leaves [{m_tilde}, {M_tilde}]"
        )
    xbar = integral_mean(densities, q, quad)
    T = chebychev_k_int(f, densities, q, quad).value
    lhs = 0.5 * (M_tilde - m_tilde) * _integrate_product(
        lambda s: np.abs(s - xbar), densities, q, quad
    )
    return _report("chebychev_magnitude_int", lhs, abs(T), tol,
                   T=T, m_tilde=m_tilde, M_tilde=M_tilde, xbar=xbar)


def jensen_upper_via_C_int(f: FunctionSpec,
                           densities: Sequence[DensitySpec], q,
                           quad: QuadratureSpec,
                           m_tilde: float, M_tilde: float,
                           tol: float = DEFAULT_TOL) -> BoundReport:
    """Upper-bound the integral Jensen gap through a slope range [m~, M~]."""
    if f.C is None:
        raise ValueError(f"{f.name}: no companion slope evaluator")
    q = _as_q(q)
    S = _nodes_or_samples(densities, q, quad)
    CS = np.asarray(f.C(S))
    if float(np.min(CS)) < m_tilde or float(np.max(CS)) > M_tilde:
        raise HypothesisViolation(
            f"C over quadrature nodes leaves [{m_tilde}, {M_tilde}]"
        )
    xbar = integral_mean(densities, q, quad)
    f.require(xbar)

    def g(s):
        dev = np.abs(s - xbar)
        return 0.5 * (M_tilde - m_tilde) * dev - np.asarray(f.f(dev))

    lhs = _integrate_product(g, densities, q, quad)
    rhs = jensen_k_int(f, densities, q, quad).value
    return _report("jensen_upper_via_C_int", lhs, rhs, tol,
                   m_tilde=m_tilde, M_tilde=M_tilde, xbar=xbar)
