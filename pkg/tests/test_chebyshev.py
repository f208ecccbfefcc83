"""Tests for Chebyshev models and ellipse bounds."""

import math
import os

import numpy as np
import pytest
from mpmath import mp, mpf

from cone_certify.chebyshev import (
    PUBLISHED_DOMAIN,
    PUBLISHED_RHO,
    SeriesEvaluator,
    ellipse_modulus_bound,
    ellipse_r,
    error_bound,
    fit,
    lebesgue_bound,
    load_model,
    lobatto_nodes,
    modulus_bound_table,
    published_k,
    save_model,
)
from cone_certify.errors import BoundUnavailable, DomainError
from cone_certify.interval import Interval
from cone_certify.legendre import float_eval, truncation_index

SMALL_DOMAIN = ((0.5, 1.0), (1.5, 2.0))
SMALL_RHO = (2.0, 2.0)
SMALL_DEGREES = (10, 10)
PROPERTY_CASES = int(os.environ.get("CONE_CERTIFY_FUZZ_CASES", "10000"))

mp.dps = 100


def reference_f(t, beta):
    """f(t, beta) = 2F1(-nu, nu + 1; 1; (1 - t)/2) with nu (nu + 1) = beta."""
    nu = (-1 + mp.sqrt(1 + 4 * mpf(beta))) / 2
    return mp.re(mp.hyp2f1(-nu, nu + 1, 1, (1 - mpf(t)) / 2))


@pytest.fixture(scope="module")
def small_model():
    bound = ellipse_modulus_bound(SMALL_DOMAIN, SMALL_RHO, "f", 0)
    k = truncation_index(SMALL_DOMAIN[0][0])
    return fit(SeriesEvaluator(0, k), SMALL_DOMAIN, SMALL_DEGREES, SMALL_RHO, bound.modulus, 0, "test")


class TestBounds:
    """Tests for the analytic error bounds."""

    def test_lebesgue_bound(self):
        assert lebesgue_bound(1) >= 1.0 + 2.0 / math.pi * math.log(2.0)
        assert lebesgue_bound(48) < 4.0

    def test_error_bound_decreases_with_degree(self):
        assert error_bound(10.0, (3.0, 3.0), (20, 20)) < error_bound(10.0, (3.0, 3.0), (10, 10))

    def test_published_k(self):
        # (a+b)/2 + (b-a)/2 (rho + 1/rho) = 33.37... for the published box
        assert published_k(PUBLISHED_DOMAIN[1], PUBLISHED_RHO[1]) == 33

    def test_ellipse_r_below_two(self):
        assert ellipse_r(PUBLISHED_DOMAIN[0], PUBLISHED_RHO[0]) < 2.0

    def test_ellipse_too_large(self):
        with pytest.raises(BoundUnavailable):
            ellipse_modulus_bound(PUBLISHED_DOMAIN, (10.0, 30.0), "f", 0)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            ellipse_modulus_bound(PUBLISHED_DOMAIN, PUBLISHED_RHO, "h", 0)
        with pytest.raises(ValueError):
            ellipse_modulus_bound(PUBLISHED_DOMAIN, (1.0, 30.0), "f", 0)

    def test_modulus_bound_is_at_least_sup_on_domain(self):
        bound = ellipse_modulus_bound(SMALL_DOMAIN, SMALL_RHO, "f", 0)
        t = np.linspace(0.5, 1.0, 21)
        assert np.all(np.abs(float_eval(t, 1.75, 0)) <= bound.modulus)


class TestModulusTable:
    """Tests for the bounds table."""

    def test_rows_finite(self):
        table = modulus_bound_table()
        assert [row["derivative"] for row in table.rows] == [0, 1, 2]
        for row in table.rows:
            assert math.isfinite(row["f"])
            assert math.isfinite(row["g"])
            assert row["published"] > 0
        assert math.isfinite(table.combined_bound)
        assert table.k == 33

    def test_derivative_bounds_grow(self):
        table = modulus_bound_table()
        values = [row["f"] for row in table.rows]
        assert values[0] < values[1] < values[2]


class TestModels:
    """Tests for fitted models."""

    def test_lobatto_nodes_in_domain(self):
        nodes = lobatto_nodes(-0.3, 1.0, 12)
        assert np.all(nodes.lo >= -0.3)
        assert np.all(nodes.hi <= 1.0)
        assert nodes[0].contains(1.0)

    def test_model_encloses_target(self, small_model):
        rng = np.random.default_rng(3)
        t = rng.uniform(0.5, 1.0, 30)
        beta = rng.uniform(1.5, 2.0, 30)
        value = small_model(Interval(t), Interval(beta))
        exact = float_eval(t, beta, 0)
        assert np.all(value.lo <= exact)
        assert np.all(exact <= value.hi)

    def test_outside_domain(self, small_model):
        with pytest.raises(DomainError):
            small_model(Interval(0.2), Interval(1.7))

    def test_cache_round_trip(self, small_model, tmp_path):
        path = tmp_path / "model.json"
        save_model(small_model, path)
        loaded = load_model(path, "test")
        assert loaded.degrees == small_model.degrees
        assert loaded.error_bound == small_model.error_bound
        assert np.array_equal(loaded.coeffs.lo, small_model.coeffs.lo)

    def test_cache_digest_mismatch(self, small_model, tmp_path):
        path = tmp_path / "model.json"
        save_model(small_model, path)
        with pytest.raises(ValueError):
            load_model(path, "another")

    def test_cache_corruption_detected(self, small_model, tmp_path):
        path = tmp_path / "model.json"
        save_model(small_model, path)
        path.write_text(path.read_text().replace('"version": 1', '"version": 2'))
        with pytest.raises(ValueError):
            load_model(path)


class TestInterpolationValidity:
    """The proven error bound holds against independent reference values."""

    @pytest.mark.slow
    def test_containment_against_reference(self, small_model):
        rng = np.random.default_rng(17)
        t = rng.uniform(*SMALL_DOMAIN[0], PROPERTY_CASES)
        beta = rng.uniform(*SMALL_DOMAIN[1], PROPERTY_CASES)
        value = small_model(Interval(t), Interval(beta))
        for i in range(PROPERTY_CASES):
            exact = reference_f(t[i], beta[i])
            assert mpf(float(value.lo[i])) <= exact <= mpf(float(value.hi[i])), (t[i], beta[i])

    def test_sup_error_within_bound(self, small_model):
        t, beta = np.meshgrid(
            np.linspace(*SMALL_DOMAIN[0], 200), np.linspace(*SMALL_DOMAIN[1], 200)
        )
        value = small_model(Interval(t), Interval(beta))
        error = np.max(np.abs(value.mid - float_eval(t, beta, 0)))
        assert error <= small_model.error_bound + 1e-12
