"""Tests for outward-rounded interval arithmetic."""

import os

import numpy as np
import pytest
from mpmath import mp, mpf

from cone_certify.errors import DomainError, EmptyIntersection
from cone_certify.interval import (
    PI,
    Interval,
    arith,
    cospi,
    exp,
    func,
    hull,
    log,
    pow_nonneg,
    pow_real,
    powi,
    sqrt,
)

mp.dps = 100

FUZZ_CASES = int(os.environ.get("CONE_CERTIFY_FUZZ_CASES", "2000"))
SEED = 20240917

MP_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def encloses(x: Interval, exact) -> bool:
    return mpf(float(x.lo)) <= exact <= mpf(float(x.hi))


def random_operands(rng: np.random.Generator, n: int) -> np.ndarray:
    mantissa = rng.uniform(-1.0, 1.0, n)
    exponent = rng.integers(-30, 30, n)
    return np.ldexp(mantissa, exponent)


class TestConstruction:
    """Tests for building intervals."""

    def test_point(self):
        x = Interval.point(2.5)
        assert x.is_point()
        assert x.to_pair() == (2.5, 2.5)

    def test_out_of_order_rejected(self):
        with pytest.raises(DomainError):
            Interval(2.0, 1.0)

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            Interval(float("nan"), 1.0)

    def test_from_text_exact_binary(self):
        assert Interval.from_text("0.5").to_pair() == (0.5, 0.5)

    def test_from_text_encloses_decimal(self):
        """0.1 is not a binary64 number, so the enclosure has width one ulp."""
        x = Interval.from_text("0.1")
        assert encloses(x, mpf(1) / 10)
        assert float(x.hi) == np.nextafter(float(x.lo), np.inf)

    def test_from_bounds(self):
        x = Interval.from_bounds("0.3", "0.41")
        assert encloses(x, mpf(3) / 10)
        assert encloses(x, mpf(41) / 100)

    def test_truth_value_is_ambiguous(self):
        with pytest.raises(TypeError):
            bool(Interval(0.0, 1.0))

    def test_boolean_operand_rejected(self):
        with pytest.raises(TypeError):
            Interval(1.0, 2.0) + True

    def test_array_shapes(self):
        x = Interval(np.zeros(3), np.ones(3))
        assert x.shape == (3,)
        assert x[1].to_pair() == (0.0, 1.0)


class TestExactness:
    """Exact results stay exact."""

    def test_sqrt_of_squares(self):
        assert sqrt(Interval(4.0, 9.0)).to_pair() == (2.0, 3.0)

    def test_exact_sum(self):
        assert (Interval(1.0, 2.0) + Interval(0.5, 0.25 + 0.5)).to_pair() == (1.5, 2.75)

    def test_exact_product(self):
        assert (Interval(-2.0, 3.0) * Interval(4.0, 5.0)).to_pair() == (-10.0, 15.0)

    def test_even_power_of_straddling_interval(self):
        assert powi(Interval(-2.0, 1.0), 2).to_pair() == (0.0, 4.0)

    def test_odd_power(self):
        assert powi(Interval(-2.0, 1.0), 3).to_pair() == (-8.0, 1.0)

    def test_zero_power(self):
        assert powi(Interval(-2.0, 1.0), 0).to_pair() == (1.0, 1.0)

    def test_pow_nonneg_zero_to_zero(self):
        assert pow_nonneg(Interval(0.0, 0.0), Interval(0.0, 0.0)).to_pair() == (1.0, 1.0)

    def test_pow_nonneg_zero_base(self):
        assert pow_nonneg(Interval(0.0, 0.0), Interval(1.5, 2.0)).to_pair() == (0.0, 0.0)

    def test_abs(self):
        assert abs(Interval(-3.0, 2.0)).to_pair() == (0.0, 3.0)


class TestContainment:
    """Randomised containment against 100-digit reference values."""

    @pytest.mark.parametrize("kind", ["add", "sub", "mul", "div"])
    def test_binary_operations(self, kind):
        rng = np.random.default_rng(SEED)
        a = random_operands(rng, FUZZ_CASES)
        b = random_operands(rng, FUZZ_CASES)
        b[b == 0.0] = 1.0
        result = arith(Interval.point(a), Interval.point(b), kind)
        for i in range(FUZZ_CASES):
            assert encloses(result[i], MP_OPS[kind](mpf(a[i]), mpf(b[i]))), (kind, a[i], b[i])

    def test_sqrt(self):
        rng = np.random.default_rng(SEED + 1)
        a = np.abs(random_operands(rng, FUZZ_CASES))
        result = sqrt(Interval.point(a))
        for i in range(FUZZ_CASES):
            assert encloses(result[i], mp.sqrt(mpf(a[i])))

    def test_exp(self):
        rng = np.random.default_rng(SEED + 2)
        a = rng.uniform(-50.0, 50.0, FUZZ_CASES)
        result = exp(Interval.point(a))
        for i in range(FUZZ_CASES):
            assert encloses(result[i], mp.exp(mpf(a[i])))

    def test_log(self):
        rng = np.random.default_rng(SEED + 3)
        a = np.ldexp(rng.uniform(0.5, 1.0, FUZZ_CASES), rng.integers(-60, 60, FUZZ_CASES))
        result = log(Interval.point(a))
        for i in range(FUZZ_CASES):
            assert encloses(result[i], mp.log(mpf(a[i])))

    def test_pow_real(self):
        rng = np.random.default_rng(SEED + 4)
        base = rng.uniform(0.01, 4.0, FUZZ_CASES)
        exponent = rng.uniform(-3.0, 3.0, FUZZ_CASES)
        result = pow_real(Interval.point(base), Interval.point(exponent))
        for i in range(FUZZ_CASES):
            assert encloses(result[i], mpf(base[i]) ** mpf(exponent[i]))

    def test_interval_operands(self):
        """Every sampled point combination lies inside the result."""
        x = Interval(-1.5, 2.25)
        y = Interval(0.125, 3.0)
        for kind in MP_OPS:
            result = arith(x, y, kind)
            for a in (-1.5, 0.0, 2.25):
                for b in (0.125, 1.0, 3.0):
                    assert encloses(result, MP_OPS[kind](mpf(a), mpf(b)))

    def test_pi(self):
        assert encloses(PI, mp.pi)


class TestCospi:
    """Tests for cos(pi p/q)."""

    @pytest.mark.parametrize(
        "p,q", [(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (5, 7), (-3, 11), (13, 6)]
    )
    def test_encloses(self, p, q):
        assert encloses(cospi(p, q), mp.cospi(mpf(p) / q))

    def test_vectorised(self):
        n = np.arange(8)
        result = cospi(2 * n + 1, 16)
        for i in range(8):
            assert encloses(result[i], mp.cospi(mpf(2 * i + 1) / 16))

    def test_right_angle_is_exact(self):
        assert cospi(1, 2).to_pair() == (0.0, 0.0)

    def test_bad_denominator(self):
        with pytest.raises(DomainError):
            cospi(1, 0)


class TestDomainErrors:
    """Operations outside their domain raise instead of returning NaN."""

    def test_division_by_interval_with_zero(self):
        with pytest.raises(DomainError):
            Interval(1.0, 2.0) / Interval(-1.0, 1.0)

    def test_sqrt_of_negative(self):
        with pytest.raises(DomainError):
            sqrt(Interval(-1.0, 4.0))

    def test_log_of_zero(self):
        with pytest.raises(DomainError):
            log(Interval(0.0, 1.0))

    def test_pow_real_needs_positive_base(self):
        with pytest.raises(DomainError):
            pow_real(Interval(0.0, 1.0), 0.5)

    def test_empty_intersection(self):
        with pytest.raises(EmptyIntersection):
            Interval(0.0, 1.0).intersect(Interval(2.0, 3.0))

    def test_unknown_kinds(self):
        with pytest.raises(ValueError):
            arith(1.0, 2.0, "pow")
        with pytest.raises(ValueError):
            func(1.0, "tan")


class TestHelpers:
    """Tests for hull, intersection and set predicates."""

    def test_hull(self):
        assert hull(1.0, Interval(-2.0, 0.0), 3.0).to_pair() == (-2.0, 3.0)

    def test_intersect(self):
        assert Interval(0.0, 2.0).intersect(Interval(1.0, 3.0)).to_pair() == (1.0, 2.0)

    def test_set_predicates(self):
        x = Interval(0.0, 2.0)
        assert bool(Interval(0.5, 1.0).subset(x))
        assert bool(Interval(0.5, 1.0).interior(x))
        assert not bool(Interval(0.0, 1.0).interior(x))
        assert bool(x.contains(2.0))
        assert not bool(x.overlaps(Interval(2.5, 3.0)))

    def test_func_powi(self):
        assert func(Interval(2.0, 3.0), "powi", 3).to_pair() == (8.0, 27.0)
