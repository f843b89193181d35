import math

import numpy as np
import pytest

from jensengap import (
    DensitySpec,
    HypothesisViolation,
    QuadratureSpec,
    chebychev_k_int,
    chebychev_magnitude_bound_int,
    density_from_id,
    function_from_id,
    integral_mean,
    jensen_k_int,
    jensen_upper_via_C_int,
    load_tabulated_density,
    lower_bound_superquadratic_int,
    ratio_extrema_int,
    sandwich_bounds_int,
)
from jensengap.functions import FunctionSpec

P2 = function_from_id("power:2")
P4 = function_from_id("power:4")
TENSOR = QuadratureSpec("tensor_gauss", nodes_per_axis=16)
Q1 = np.array([1.0])

UNIT_UNIFORM = density_from_id("uniform", (0.0, 1.0))


class TestDensitySpec:
    def test_uniform_and_linear_ids(self):
        d = density_from_id("uniform", (1.0, 2.0))
        assert d.pdf(np.array([1.3]))[0] == pytest.approx(1.0)
        r = density_from_id("linear", (1.0, 2.0))
        assert r.pdf(np.array([1.5]))[0] == pytest.approx(1.0)  # 2x/3 at 1.5

    def test_powerlaw_mass(self):
        d = density_from_id("powerlaw:2.5", (0.5, 3.0))
        x, w = np.polynomial.legendre.leggauss(64)
        x = 1.75 + 1.25 * x
        assert float(np.sum(1.25 * w * d.pdf(x))) == pytest.approx(1.0, abs=1e-10)

    def test_non_unit_mass_rejected(self):
        with pytest.raises(ValueError):
            DensitySpec("bad", lambda x: np.full_like(x, 2.0), (0.0, 1.0))

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            DensitySpec("bad", lambda x: x - 0.5, (0.0, 1.0))

    def test_tabulated_normalization(self, tmp_path):
        path = tmp_path / "dens.csv"
        xs = np.linspace(1.0, 2.0, 101)
        path.write_text("\n".join(f"{x},{3.0}" for x in xs))
        d = load_tabulated_density(str(path))
        assert d.pdf(np.array([1.5]))[0] == pytest.approx(1.0)


class TestQuadratureSpec:
    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            QuadratureSpec("simpson")

    def test_mc_sample_floor(self):
        with pytest.raises(ValueError):
            QuadratureSpec("monte_carlo", sample_count=10)

    def test_from_config_keys(self):
        q = QuadratureSpec.from_config(
            {"quad.mode": "monte_carlo", "quad.samples": 5000, "quad.seed": 9})
        assert q.mode == "monte_carlo"
        assert q.sample_count == 5000
        assert q.seed == 9


class TestIntegralMean:
    def test_uniform_unit(self):
        assert integral_mean([UNIT_UNIFORM], Q1, TENSOR) == pytest.approx(0.5)

    def test_uniform_general_interval(self):
        d = density_from_id("uniform", (1.0, 3.0))
        q = np.array([0.3, 0.7])
        assert integral_mean([d, d], q, TENSOR) == pytest.approx(2.0)

    def test_linear_density_moment(self):
        d = density_from_id("linear", (0.0, 1.0))  # density 2x
        assert integral_mean([d], Q1, TENSOR) == pytest.approx(2.0 / 3.0)


class TestJensenKInt:
    def test_k1_uniform_square(self):
        fv = jensen_k_int(P2, [UNIT_UNIFORM], Q1, TENSOR)
        assert fv.value == pytest.approx(1.0 / 12.0, abs=1e-12)
        assert fv.xbar == pytest.approx(0.5)

    def test_k2_uniform_square(self):
        q = np.array([0.5, 0.5])
        fv = jensen_k_int(P2, [UNIT_UNIFORM] * 2, q, TENSOR)
        assert fv.value == pytest.approx(1.0 / 24.0, abs=1e-12)

    def test_k3_uniform_square_low_order_rule(self):
        quad = QuadratureSpec("tensor_gauss", nodes_per_axis=4)
        q = np.ones(3) / 3.0
        fv = jensen_k_int(P2, [UNIT_UNIFORM] * 3, q, quad)
        assert fv.value == pytest.approx(1.0 / 36.0, abs=1e-12)

    def test_constant_function(self):
        const = FunctionSpec("one", lambda x: np.ones_like(np.asarray(x, float)))
        fv = jensen_k_int(const, [UNIT_UNIFORM], Q1, TENSOR)
        assert fv.value == pytest.approx(0.0, abs=1e-13)

    def test_mc_within_standard_errors(self):
        quad = QuadratureSpec("monte_carlo", sample_count=10 ** 5, seed=3)
        q = np.array([0.5, 0.5])
        fv = jensen_k_int(P4, [UNIT_UNIFORM] * 2, q, quad)
        exact = jensen_k_int(P4, [UNIT_UNIFORM] * 2, q, TENSOR).value
        assert abs(fv.value - exact) <= 4.0 * fv.stderr

    def test_mc_deterministic(self):
        quad = QuadratureSpec("monte_carlo", sample_count=2000, seed=5)
        a = jensen_k_int(P2, [UNIT_UNIFORM], Q1, quad).value
        b = jensen_k_int(P2, [UNIT_UNIFORM], Q1, quad).value
        assert a == b


class TestChebychevKInt:
    def test_k1_uniform_square(self):
        fv = chebychev_k_int(P2, [UNIT_UNIFORM], Q1, TENSOR)
        assert fv.value == pytest.approx(1.0 / 12.0, abs=1e-12)

    def test_constant_function(self):
        const = FunctionSpec("one", lambda x: np.ones_like(np.asarray(x, float)))
        fv = chebychev_k_int(const, [UNIT_UNIFORM], Q1, TENSOR)
        assert fv.value == pytest.approx(0.0, abs=1e-13)

    def test_even_function_about_midpoint(self):
        even = FunctionSpec("shifted_square",
                            lambda x: (np.asarray(x, float) - 0.5) ** 2)
        fv = chebychev_k_int(even, [UNIT_UNIFORM], Q1, TENSOR)
        assert fv.value == pytest.approx(0.0, abs=1e-13)


class TestLowerBoundInt:
    def test_k1_square_equality(self):
        rep = lower_bound_superquadratic_int(P2, [UNIT_UNIFORM], Q1, TENSOR)
        assert rep.lhs == pytest.approx(1.0 / 12.0, abs=1e-12)
        assert rep.rhs == pytest.approx(1.0 / 12.0, abs=1e-12)

    def test_k2_square_equality(self):
        q = np.array([0.5, 0.5])
        rep = lower_bound_superquadratic_int(P2, [UNIT_UNIFORM] * 2, q, TENSOR)
        assert rep.lhs == pytest.approx(1.0 / 24.0, abs=1e-12)
        assert rep.rhs == pytest.approx(1.0 / 24.0, abs=1e-12)

    def test_k1_power4(self):
        rep = lower_bound_superquadratic_int(P4, [UNIT_UNIFORM], Q1, TENSOR)
        assert rep.lhs == pytest.approx(1.0 / 5.0 - 1.0 / 16.0, abs=1e-12)
        assert rep.rhs == pytest.approx(1.0 / 80.0, abs=1e-12)
        assert rep.holds

    def test_remark_identity_rearrangement(self):
        # k=1: lhs - rhs == int f p - f(mean) - int f(|x - mean|) p
        d = density_from_id("linear", (0.0, 1.0))
        rep = lower_bound_superquadratic_int(P4, [d], Q1, TENSOR)
        x, w = np.polynomial.legendre.leggauss(16)
        x = 0.5 + 0.5 * x
        w = 0.5 * w * d.pdf(x)
        mean = 2.0 / 3.0
        direct = (float(np.sum(w * x ** 4)) - mean ** 4
                  - float(np.sum(w * np.abs(x - mean) ** 4)))
        assert rep.slack == pytest.approx(direct, abs=1e-12)


class TestRatioExtremaInt:
    def test_identical_densities_exact(self):
        d = density_from_id("linear", (1.0, 2.0))
        ext = ratio_extrema_int([d], [d], 64)
        assert ext.m == 1.0 and ext.M == 1.0

    def test_uniform_vs_linear_closed_form(self):
        # ratio of subinterval masses is 3/(s+t): extremes 3/4 and 3/2
        p = density_from_id("uniform", (1.0, 2.0))
        r = density_from_id("linear", (1.0, 2.0))
        ext = ratio_extrema_int([p], [r], 256)
        assert ext.m == pytest.approx(0.75, abs=1e-3)
        assert ext.M == pytest.approx(1.5, abs=1e-3)
        assert ext.m_from_limit and ext.M_from_limit
        assert ext.arg_m[0] == pytest.approx(2.0)
        assert ext.arg_M[0] == pytest.approx(1.0)

    def test_k2_is_square_of_k1(self):
        p = density_from_id("uniform", (1.0, 2.0))
        r = density_from_id("linear", (1.0, 2.0))
        ext = ratio_extrema_int([p, p], [r, r], 256)
        assert ext.m == pytest.approx(0.75 ** 2, abs=2e-3)
        assert ext.M == pytest.approx(1.5 ** 2, abs=2e-3)

    def test_resolution_refinement_is_monotone(self):
        p = density_from_id("powerlaw:2", (1.0, 2.0))
        r = density_from_id("linear", (1.0, 2.0))
        lo_res = ratio_extrema_int([p], [r], 64)
        hi_res = ratio_extrema_int([p], [r], 128)
        assert hi_res.m <= lo_res.m + 1e-15
        assert hi_res.M >= lo_res.M - 1e-15


class TestSandwichInt:
    def test_identical_densities(self):
        d = density_from_id("linear", (1.0, 2.0))
        lo, hi = sandwich_bounds_int(P2, [d], [d], Q1, TENSOR)
        assert lo.lhs == pytest.approx(0.0, abs=1e-12)
        assert lo.rhs <= 1e-12
        assert lo.holds and hi.holds

    def test_uniform_linear_closed_form(self):
        # f = x^2 on [1,2]: both sides reduce to exact fractions
        p = density_from_id("uniform", (1.0, 2.0))
        r = density_from_id("linear", (1.0, 2.0))
        lo, hi = sandwich_bounds_int(P2, [p], [r], Q1, TENSOR)
        want_lo = 1.0 / 432.0 + 1.0 / 48.0
        assert lo.lhs == pytest.approx(want_lo, abs=1e-6)
        assert lo.rhs == pytest.approx(want_lo, abs=1e-6)
        assert hi.lhs == pytest.approx(1.0 / 27.0, abs=1e-6)
        assert hi.rhs == pytest.approx(1.0 / 27.0, abs=1e-6)

    def test_square_slack_under_finer_rule(self):
        rng = np.random.default_rng(61)
        quad32 = QuadratureSpec("tensor_gauss", nodes_per_axis=32)
        for _ in range(10):
            a = float(rng.uniform(0.5, 1.0))
            b = float(rng.uniform(1.5, 3.0))
            alpha = float(rng.integers(0, 3))
            beta = float(rng.integers(0, 3))
            p = density_from_id(f"powerlaw:{alpha}", (a, b))
            r = density_from_id(f"powerlaw:{beta}", (a, b))
            lo, hi = sandwich_bounds_int(P2, [p], [r], Q1, quad32)
            for rep in (lo, hi):
                scale = max(1.0, abs(rep.lhs), abs(rep.rhs))
                assert rep.slack >= -1e-9 * scale

    def test_k2_superquadratic_holds(self):
        p = density_from_id("uniform", (1.0, 2.0))
        r = density_from_id("linear", (1.0, 2.0))
        q = np.array([0.4, 0.6])
        lo, hi = sandwich_bounds_int(P4, [p, p], [r, r], q, TENSOR)
        assert lo.holds and hi.holds


class TestChebychevMagnitudeInt:
    # the |x - xbar| kink limits Gauss accuracy: ~1e-5 at 200 nodes

    def test_square_unit_uniform(self):
        quad = QuadratureSpec("tensor_gauss", nodes_per_axis=200)
        rep = chebychev_magnitude_bound_int(
            P2, [UNIT_UNIFORM], Q1, quad, 0.0, 1.0)
        assert rep.lhs == pytest.approx(1.0 / 8.0, abs=1e-5)
        assert rep.rhs == pytest.approx(1.0 / 12.0, abs=1e-12)
        assert rep.holds

    def test_power4_unit_uniform(self):
        quad = QuadratureSpec("tensor_gauss", nodes_per_axis=200)
        rep = chebychev_magnitude_bound_int(
            P4, [UNIT_UNIFORM], Q1, quad, 0.0, 1.0)
        assert rep.lhs == pytest.approx(1.0 / 8.0, abs=1e-5)
        assert rep.rhs == pytest.approx(1.0 / 15.0, abs=1e-12)
        assert rep.holds

    def test_hypothesis_violation(self):
        with pytest.raises(HypothesisViolation):
            chebychev_magnitude_bound_int(
                P2, [UNIT_UNIFORM], Q1, TENSOR, 0.5, 1.0)


class TestJensenUpperViaCInt:
    def test_square_unit_uniform(self):
        quad = QuadratureSpec("tensor_gauss", nodes_per_axis=200)
        rep = jensen_upper_via_C_int(
            P2, [UNIT_UNIFORM], Q1, quad, 0.0, 2.0)
        assert rep.lhs == pytest.approx(1.0 / 6.0, abs=1e-5)
        assert rep.rhs == pytest.approx(1.0 / 12.0, abs=1e-12)
        assert rep.holds

    def test_k2_uniform(self):
        q = np.array([0.5, 0.5])
        rep = jensen_upper_via_C_int(
            P2, [UNIT_UNIFORM] * 2, q, TENSOR, 0.0, 2.0)
        assert rep.rhs == pytest.approx(1.0 / 24.0, abs=1e-12)
        assert rep.holds

    def test_shrinking_interval_slack_to_minus_f0(self):
        d = density_from_id("uniform", (0.9999, 1.0001))
        rep = jensen_upper_via_C_int(P2, [d], Q1, TENSOR, 0.0, 3.0)
        # J -> 0 and the bound -> -f(0) = 0 from above
        assert rep.slack >= -1e-12
        assert rep.slack == pytest.approx(0.0, abs=1e-4)


def test_tensor_mode_rejects_high_dimension():
    with pytest.raises(ValueError):
        jensen_k_int(P2, [UNIT_UNIFORM] * 5, np.ones(5) / 5.0, TENSOR)


def test_interval_mismatch_rejected():
    d1 = density_from_id("uniform", (0.0, 1.0))
    d2 = density_from_id("uniform", (0.0, 2.0))
    with pytest.raises(ValueError):
        jensen_k_int(P2, [d1, d2], np.array([0.5, 0.5]), TENSOR)
