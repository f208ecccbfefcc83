"""Tests for the subsolution certificate."""

import numpy as np
import pytest

from cone_certify.certificate import Verdict
from cone_certify.cone import ConeParams
from cone_certify.interval import Interval
from cone_certify.roots import find_t_c
from cone_certify.subsolution import (
    G,
    SubsolutionTask,
    c_subintervals,
    certify_subinterval,
    derivatives,
    g3_G_prime,
    verify_subsolution,
)


class TestDerivatives:
    """Tests for the G and g^3 G' enclosures."""

    def test_derivatives_at_c_zero(self):
        # beta = 2: f = t, f' = 1, f'' = 0
        f, df, d2f, g, dg, _ = derivatives(Interval(0.5), Interval(2.0))
        assert f.contains(0.5)
        assert df.contains(1.0)
        assert d2f.contains(0.0)
        assert float(g.lo) >= 1.0
        assert float(dg.hi) < 0.0

    def test_g3_G_prime_positive_at_one(self):
        params = ConeParams.from_c(Interval(0.2))
        assert float(g3_G_prime(Interval(1.0), params).lo) > 0.0

    def test_G_grows_from_t_c(self):
        params = ConeParams.from_c(Interval(0.3))
        t_c = float(find_t_c(params.c).interval.mid)
        near = G(Interval(t_c + 0.01), params)
        far = G(Interval(0.9), params)
        assert float(far.lo) > float(near.hi)

    def test_vectorised_boxes(self):
        params = ConeParams.from_c(Interval(0.1))
        t = Interval(np.linspace(0.0, 0.9, 10), np.linspace(0.1, 1.0, 10))
        value = g3_G_prime(t, params)
        assert value.shape == (10,)


class TestSweep:
    """Tests for the c-subinterval sweep."""

    def test_c_subintervals_cover_range(self):
        edges = c_subintervals(("0", "0.58828"), 4)
        assert edges[0] == 0.0
        assert edges[-1] >= 0.58828
        assert len(edges) == 5

    def test_single_subinterval_passes(self):
        result = certify_subinterval(SubsolutionTask(0.1, 0.11, 64, 2, 6))
        assert result.error is None
        assert result.sweep.passed
        assert result.sweep.counts["pass"] > 0
        assert "t_c" in result.notes

    @pytest.mark.slow
    def test_coarse_certificate(self):
        certificate = verify_subsolution(("0", "0.05"), n_c=2, n_t=64, n_beta=2, depth=6)
        assert certificate.verdict == Verdict.PASS
        assert certificate.claim_id == "subsolution"
        assert certificate.parameters["mode"] == "direct"

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            verify_subsolution(("0", "0.05"), n_c=1, mode="spline")


class TestNegativeControl:
    """Above c0 the subsolution inequality breaks down."""

    @pytest.mark.slow
    def test_beyond_c0_fails(self):
        certificate = verify_subsolution(("0.60", "0.62"), n_c=2, n_t=64, n_beta=2, depth=4)
        assert certificate.verdict == Verdict.FAIL
        assert certificate.failed_cells


class TestThreads:
    """Results do not depend on the worker count."""

    @pytest.mark.slow
    def test_serial_and_pool_agree(self):
        serial = verify_subsolution(("0", "0.05"), n_c=4, n_t=32, n_beta=2, depth=4, threads=1)
        pooled = verify_subsolution(("0", "0.05"), n_c=4, n_t=32, n_beta=2, depth=4, threads=2)
        assert serial.verdict == pooled.verdict
        assert serial.total.minimum == pooled.total.minimum
        assert serial.total.counts == pooled.total.counts
