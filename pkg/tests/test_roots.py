"""Tests for Newton root isolation."""

import numpy as np
import pytest

from cone_certify.cone import ConeParams, cone_grad_sq, one_minus_t_sq
from cone_certify.errors import DomainError, NumericalError
from cone_certify.interval import Interval, sqrt
from cone_certify.roots import (
    RootStatus,
    find_roots_batch,
    find_t_c,
    interval_newton,
    newton_float,
    normalization,
)


def square_minus_two(x: Interval) -> Interval:
    return x * x - 2.0


def twice(x: Interval) -> Interval:
    return 2.0 * x


class TestNewtonFloat:
    """Tests for the floating point seed iteration."""

    def test_converges(self):
        root = newton_float(lambda x: x * x - 2.0, lambda x: 2.0 * x, 1.0)
        assert root == pytest.approx(2.0**0.5)

    def test_zero_derivative(self):
        with pytest.raises(NumericalError):
            newton_float(lambda x: x * x + 1.0, lambda x: 2.0 * x, 0.0)


class TestIntervalNewton:
    """Tests for the interval Newton operator."""

    def test_sqrt_two(self):
        result = interval_newton(square_minus_two, twice, Interval(1.0, 2.0))
        assert result.status == RootStatus.VERIFIED_UNIQUE
        assert result.verified
        assert result.interval.overlaps(sqrt(Interval(2.0)))
        assert float(result.interval.width) < 1e-14

    def test_no_root(self):
        result = interval_newton(square_minus_two, twice, Interval(2.0, 3.0))
        assert result.status == RootStatus.NO_ROOT
        assert not result.verified

    def test_derivative_straddling_zero_is_inconclusive(self):
        result = interval_newton(square_minus_two, twice, Interval(-2.0, 2.0))
        assert result.status == RootStatus.INCONCLUSIVE


class TestZeroOfF:
    """Tests for t_c, the zero of f(., beta_c)."""

    def test_c_zero_gives_equator(self):
        # beta = 2 makes f(t) = t
        result = find_t_c(Interval(0.0))
        assert result.verified
        assert result.interval.contains(0.0)

    def test_t_c_decreases_with_c(self):
        a = find_t_c(Interval(0.2)).interval
        b = find_t_c(Interval(0.5)).interval
        assert float(b.hi) < float(a.lo) < 0.0

    def test_interval_parameter(self):
        result = find_t_c(Interval(0.3, 0.31))
        assert result.verified
        low = find_t_c(Interval(0.3)).interval
        high = find_t_c(Interval(0.31)).interval
        assert low.overlaps(result.interval)
        assert high.overlaps(result.interval)

    @pytest.mark.parametrize("c_lo,c_hi", [(0.0, 0.1), (0.3, 0.31), (0.5, 0.51)])
    def test_wide_parameter_cells(self, c_lo, c_hi):
        result = find_t_c(Interval(c_lo, c_hi))
        assert result.verified
        for c in (c_lo, 0.5 * (c_lo + c_hi), c_hi):
            point = find_t_c(Interval(c)).interval
            assert bool(point.overlaps(result.interval))

    def test_batch_of_wide_cells(self):
        c = Interval(np.array([0.0, 0.2, 0.4]), np.array([0.1, 0.3, 0.5]))
        result = find_roots_batch(ConeParams.from_c(c).beta)
        assert result.all_verified
        assert np.all(result.interval.hi < 0.01)

    def test_batch(self):
        beta = ConeParams.from_c(Interval(np.array([0.0, 0.1, 0.4]))).beta
        result = find_roots_batch(beta)
        assert result.all_verified
        assert result.interval.shape == (3,)

    def test_c_out_of_range(self):
        with pytest.raises(DomainError):
            find_t_c(Interval(1.5))

    def test_normalization_at_c_zero(self):
        # f = t, t_c = 0, f'(t_c) = 1
        kappa = normalization(Interval(2.0))
        assert kappa.contains(1.0)


class TestCone:
    """Tests for cone parameters."""

    def test_beta_and_sigma(self):
        params = ConeParams.from_c(Interval(0.0))
        assert params.beta.to_pair() == (2.0, 2.0)
        assert params.sigma.to_pair() == (2.25, 2.25)

    def test_from_beta_round_trip(self):
        params = ConeParams.from_beta(ConeParams.from_c(Interval(0.5)).beta)
        assert params.c.contains(0.5)

    def test_negative_c(self):
        with pytest.raises(DomainError):
            ConeParams.from_c(Interval(-0.1, 0.1))

    def test_one_minus_t_sq_clipped(self):
        assert float(one_minus_t_sq(Interval(-1.0, 1.0)).lo) == 0.0

    def test_grad_sq_of_linear_function(self):
        # u = x4 = r t on the flat cone: |grad u| = 1
        t = Interval(0.3)
        value = cone_grad_sq(t, Interval(1.0), t, Interval(1.0))
        assert value.contains(1.0)
