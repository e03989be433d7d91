"""Periodic grids, stencils, quadrature, RK4."""

import math

import numpy as np
import pytest

from liftlab.expr import Const, Var, VarId
from liftlab.grid import (
    AperiodicDataError, Grid, GridError, GridField, NumericalAbortError,
    check_periodic, compile_numeric, discretize, quadrature, rk4_step,
    spatial_derivative,
)
from liftlab.parser import parse_expr

X, Y, Z = (VarId(n, i) for i, n in enumerate("xyz"))


class TestGrid:
    def test_spacing_closes_the_circle(self):
        g = Grid(1, 8)
        assert g.h * g.n == pytest.approx(2 * math.pi, abs=1e-15)

    def test_odd_n_rejected(self):
        with pytest.raises(GridError):
            Grid(1, 9)

    def test_out_of_range_n_rejected(self):
        with pytest.raises(GridError):
            Grid(1, 6)
        with pytest.raises(GridError):
            Grid(2, 130)

    def test_field_shape_checked(self):
        g = Grid(2, 8)
        with pytest.raises(GridError):
            GridField(g, np.zeros((8, 4, 1)))

    def test_field_rejects_nan(self):
        g = Grid(1, 8)
        data = np.zeros((8, 1))
        data[3, 0] = math.nan
        with pytest.raises(GridError):
            GridField(g, data)


class TestDiscretize:
    def test_sine_samples(self):
        g = Grid(1, 8)
        vals = discretize(parse_expr("sin(x)", [X]), g, {X: 0})
        want = np.sin(np.arange(8) * g.h)
        assert np.allclose(vals, want, atol=1e-15)

    def test_constant_field(self):
        g = Grid(2, 8)
        vals = discretize(Const(1), g, {X: 0, Y: 1})
        assert vals.shape == (8, 8) and np.all(vals == 1.0)

    def test_aperiodic_rejected_without_override(self):
        g = Grid(1, 8)
        with pytest.raises(AperiodicDataError):
            discretize(Var(X), g, {X: 0})
        vals = discretize(Var(X), g, {X: 0}, allow_aperiodic=True)
        assert vals[1] == pytest.approx(g.h)

    def test_periodicity_checker_accepts_trig(self):
        g = Grid(2, 8)
        e = parse_expr("sin(x)*cos(2*y) + 1/2", [X, Y])
        assert check_periodic(e, g, {X: 0, Y: 1})


class TestSpatialDerivative:
    def test_sine_derivative_accuracy(self):
        g = Grid(1, 32)
        x = np.arange(32) * g.h
        d = spatial_derivative(np.sin(x), 0, g.h)
        assert np.max(np.abs(d - np.cos(x))) < 2e-4

    def test_constant_derivative_exact_zero(self):
        g = Grid(1, 16)
        assert np.all(spatial_derivative(np.full(16, 3.7), 0, g.h) == 0.0)

    def test_fourth_order_refinement(self):
        errs = []
        for n in (16, 32, 64):
            g = Grid(1, n)
            x = np.arange(n) * g.h
            d = spatial_derivative(np.sin(x), 0, g.h)
            errs.append(np.max(np.abs(d - np.cos(x))))
        rate = math.log2(errs[0] / errs[1])
        assert rate > 3.8
        rate2 = math.log2(errs[1] / errs[2])
        assert rate2 > 3.8


class TestQuadrature:
    def test_sine_integrates_to_zero(self):
        g = Grid(1, 16)
        x = np.arange(16) * g.h
        assert abs(quadrature(np.sin(x), g.h, 1)) < 1e-12

    def test_unit_volume_of_torus(self):
        for n in (8, 16, 32):
            g = Grid(3, n)
            assert quadrature(np.ones(g.shape), g.h, 3) == pytest.approx(
                (2 * math.pi) ** 3, rel=1e-14)

    def test_sine_squared(self):
        g = Grid(1, 16)
        x = np.arange(16) * g.h
        assert quadrature(np.sin(x) ** 2, g.h, 1) == pytest.approx(math.pi, abs=1e-10)


class TestRk4:
    def test_linear_mode_matches_exponential(self):
        # one step on u' = 3u has error O(dt^5)
        for dt in (1e-2, 5e-3):
            out = rk4_step(np.array([1.0]), lambda u: 3.0 * u, dt)
            err = abs(out[0] - math.exp(3 * dt))
            assert err < (3 * dt) ** 5 / 60

    def test_zero_rhs_keeps_state(self):
        state = np.arange(12.0).reshape(3, 4)
        out = rk4_step(state, lambda u: np.zeros_like(u), 0.1)
        assert np.array_equal(out, state)

    def test_nan_detected(self):
        def blowup(u):
            return u * math.inf
        with pytest.raises(NumericalAbortError) as err:
            rk4_step(np.ones(4), blowup, 0.1, step_index=7)
        assert err.value.step == 7

    def test_positive_dt_required(self):
        with pytest.raises(GridError):
            rk4_step(np.ones(2), lambda u: u, 0.0)


class TestCompileNumeric:
    def test_matches_scalar_evaluation(self):
        from liftlab.expr import eval_numeric
        e = parse_expr("x^2*cos(y) - 1/2*exp(x)", [X, Y])
        fn = compile_numeric(e, {X: 0, Y: 1})
        xs = np.linspace(0.0, 1.0, 5)
        ys = np.linspace(-1.0, 1.0, 5)
        got = fn([xs, ys])
        want = [eval_numeric(e, {X: float(a), Y: float(b)}) for a, b in zip(xs, ys)]
        assert np.allclose(got, want, rtol=1e-15)

    def test_division_guard(self):
        from liftlab.expr import EvaluationDomainError
        fn = compile_numeric(parse_expr("1/x", [X]), {X: 0})
        with pytest.raises(EvaluationDomainError):
            fn([np.array([1.0, 0.0])])
