"""Adaptive quadrature: power-law model at 0, graded endpoints, budgets."""

import math

import numpy as np
import pytest
import scipy.integrate

from a2w.quadrature import (PointwiseMatrixFunction, QuadratureBudgetError,
                            adaptive_quad)


class TestPurePowers:
    @pytest.mark.parametrize("p", [-0.9, -0.5, -0.3, 0.0, 0.3, 0.7, 1.0, 1.5, 2.0])
    @pytest.mark.parametrize("b", [0.3, 1.0, 7.25])
    def test_anchored_at_zero(self, p, b):
        got = adaptive_quad(lambda x: np.abs(x) ** p, 0.0, b, 1e-10,
                            singular_exponent=p)
        want = b ** (p + 1.0) / (p + 1.0)
        assert got.real == pytest.approx(want, rel=5e-9)
        assert abs(got.imag) < 1e-12 * abs(want)

    @pytest.mark.parametrize("p", [-0.9, -0.25, 0.5])
    def test_straddling_zero_splits(self, p):
        got = adaptive_quad(lambda x: np.abs(x) ** p, -2.0, 1.0, 1e-10,
                            singular_exponent=p)
        want = (2.0 ** (p + 1.0) + 1.0) / (p + 1.0)
        assert got.real == pytest.approx(want, rel=5e-9)

    @pytest.mark.parametrize("p", [-0.5, 0.5])
    def test_negative_side_only(self, p):
        got = adaptive_quad(lambda x: np.abs(x) ** p, -3.0, 0.0, 1e-10,
                            singular_exponent=p)
        want = 3.0 ** (p + 1.0) / (p + 1.0)
        assert got.real == pytest.approx(want, rel=5e-9)

    def test_nonintegrable_exponent_rejected(self):
        with pytest.raises(ValueError):
            adaptive_quad(lambda x: np.abs(x) ** -1.5, 0.0, 1.0, 1e-8,
                          singular_exponent=-1.5)

    def test_nonintegrable_only_matters_at_zero(self):
        got = adaptive_quad(lambda x: np.abs(x) ** -1.5, 1.0, 4.0, 1e-10,
                            singular_exponent=-1.5)
        want = 2.0 * (1.0 - 0.5)  # integral of x^-3/2 from 1 to 4
        assert got.real == pytest.approx(want, rel=1e-8)


class TestSmoothIntegrands:
    @pytest.mark.parametrize("fn,a,b", [
        (np.cos, 0.0, 2.0),
        (np.exp, -1.0, 1.0),
        (lambda x: 1.0 / (1.0 + x * x), -4.0, 4.0),
    ])
    def test_matches_scipy(self, fn, a, b):
        want, _ = scipy.integrate.quad(fn, a, b, limit=200)
        got = adaptive_quad(fn, a, b, 1e-11)
        assert got.real == pytest.approx(want, rel=1e-9)

    def test_power_times_smooth(self):
        f = lambda x: np.abs(x) ** -0.5 * np.cos(x)
        want, _ = scipy.integrate.quad(
            lambda x: abs(x) ** -0.5 * math.cos(x), 0.0, 2.0, limit=400)
        got = adaptive_quad(f, 0.0, 2.0, 1e-9, singular_exponent=-0.5)
        assert got.real == pytest.approx(want, rel=1e-7)

    def test_oscillatory_window(self):
        a = 2.0 * math.pi * 50
        f = lambda x: np.cos(x) ** 2
        got = adaptive_quad(f, a, a + math.pi, 1e-10)
        assert got.real == pytest.approx(math.pi / 2.0, rel=1e-9)

    def test_complex_valued(self):
        f = lambda x: np.exp(1j * x)
        got = adaptive_quad(f, 0.0, 1.0, 1e-12)
        assert got == pytest.approx(complex(math.sin(1.0), 1.0 - math.cos(1.0)),
                                    rel=1e-10)


class TestEndpointGrading:
    def test_boundary_peak_needs_grading(self):
        # reciprocal-style peak of width 1e-3 at the left endpoint
        g = lambda x: 1.0 / (1e-6 + (x - 1.0) ** 2)
        want = math.atan(1.0 / 1e-3) / 1e-3
        graded = adaptive_quad(g, 1.0, 2.0, 1e-10, endpoint_grading=24)
        assert graded.real == pytest.approx(want, rel=1e-9)

    def test_grading_does_not_change_smooth_results(self):
        got0 = adaptive_quad(np.cos, 0.0, 1.0, 1e-12)
        got1 = adaptive_quad(np.cos, 0.0, 1.0, 1e-12, endpoint_grading=10)
        assert got0.real == pytest.approx(math.sin(1.0), rel=1e-12)
        assert got1.real == pytest.approx(math.sin(1.0), rel=1e-12)

    def test_grading_with_origin_singularity(self):
        p = -0.7
        got = adaptive_quad(lambda x: np.abs(x) ** p, 0.0, 1.0, 1e-10,
                            singular_exponent=p, endpoint_grading=12)
        assert got.real == pytest.approx(1.0 / (p + 1.0), rel=1e-8)


class TestBudgetAndValidation:
    def test_budget_exhaustion_raises(self):
        # nowhere-smooth integrand cannot converge on a tiny budget
        rng_vals = lambda x: np.sin(1.0 / (np.abs(x) + 1e-12)) / (np.abs(x) + 1e-3)
        with pytest.raises(QuadratureBudgetError):
            adaptive_quad(rng_vals, 0.0, 1.0, 1e-14, panel_budget=8)

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            adaptive_quad(np.cos, 1.0, 1.0, 1e-8)
        with pytest.raises(ValueError):
            adaptive_quad(np.cos, 2.0, 1.0, 1e-8)

    def test_determinism(self):
        f = lambda x: np.abs(x) ** -0.4 * (1.0 + np.sin(x) ** 2)
        a = adaptive_quad(f, 0.0, 3.0, 1e-10, singular_exponent=-0.4)
        b = adaptive_quad(f, 0.0, 3.0, 1e-10, singular_exponent=-0.4)
        assert a == b

    def test_tolerance_scaling(self):
        # tighter tolerance must not be less accurate on a hard integrand
        f = lambda x: np.abs(x) ** -0.8
        want = 1.0 / 0.2
        loose = adaptive_quad(f, 0.0, 1.0, 1e-4, singular_exponent=-0.8).real
        tight = adaptive_quad(f, 0.0, 1.0, 1e-12, singular_exponent=-0.8).real
        assert abs(tight - want) <= abs(loose - want) + 1e-13
        assert tight == pytest.approx(want, rel=1e-10)


class TestPointwiseMatrixFunction:
    def test_entry_closures_integrate(self):
        def entry(i, j):
            if i == j:
                return lambda x: np.abs(x) ** 0.5 + i
            return lambda x: np.zeros_like(np.asarray(x, dtype=float))

        pmf = PointwiseMatrixFunction(n=2, entry=entry, singular_exponent=None)
        assert pmf.n == 2
        top = adaptive_quad(pmf.entry(0, 0), 0.0, 1.0, 1e-10,
                            singular_exponent=0.5)
        assert top.real == pytest.approx(2.0 / 3.0, rel=1e-8)
