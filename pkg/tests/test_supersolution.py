"""Tests for the supersolution certificate and the q_s families."""

from fractions import Fraction

import numpy as np
import pytest
from mpmath import mpf

from cone_certify.certificate import Verdict
from cone_certify.config import SupersolutionRow, load_rows
from cone_certify.cone import ConeParams
from cone_certify.errors import DomainError
from cone_certify.interval import Interval
from cone_certify.supersolution import (
    HarmonicSum,
    QS_LINEAR_RANGE,
    QS_PIECEWISE_RANGE,
    QsTask,
    find_cross_point,
    grad_sq,
    grad_sq_w,
    harmonic_exponents,
    piecewise_breaks,
    qs_family,
    qs_sums,
    s1,
    s2,
    s2_sup,
    small_radius,
    t_edges,
    v_scaled,
    verify_condition1,
    verify_condition3,
    verify_supersolution,
    w,
    w_boundary,
)
from cone_certify.roots import find_t_c, normalization

# w(1, t) = 0.5 + 0.31 t stays below kappa f + epsilon g near t = 1
WEAK_ROW = SupersolutionRow(
    id="weak",
    c_lo="0",
    c_hi="0.3",
    epsilon="0.2",
    a=["0.5", "0.31", "0", "0"],
    c_subintervals=[["0", "0.1"]],
)

# epsilon = 0 leaves v = r kappa f, whose zero set is the cone t = t_c
FLAT_ROW = SupersolutionRow(
    id="flat",
    c_lo="0",
    c_hi="0.3",
    epsilon="0",
    a=["0.999", "0.31", "0", "0"],
    c_subintervals=[["0", "0.1"]],
)

# |grad w| is about 3.3 > 1 at the cross point
STEEP_ROW = SupersolutionRow(
    id="steep",
    c_lo="0",
    c_hi="0.3",
    epsilon="0.2",
    a=["0.999", "3.3", "0", "0"],
    c_subintervals=[["0", "0.1"]],
)


@pytest.fixture(scope="module")
def table():
    return load_rows()


def encloses(x: Interval, exact) -> bool:
    return mpf(float(x.lo)) <= exact <= mpf(float(x.hi))


class TestHarmonicSum:
    """Tests for w and its gradient."""

    def test_exponents_at_c_zero(self):
        alphas = harmonic_exponents(ConeParams.from_c(Interval(0.0)))
        assert [a.to_pair() for a in alphas] == [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]

    def test_exponents_grow_with_c(self):
        alphas = harmonic_exponents(ConeParams.from_c(Interval(0.4)))
        for n in (1, 2, 3):
            assert float(alphas[n].lo) > n

    def test_boundary_values_row_one(self, table):
        hs = HarmonicSum.from_row(ConeParams.from_c(Interval(0.1)), table.get_row("1"))
        for t in (-1.0, -0.3, 0.5, 1.0):
            assert encloses(w_boundary(Interval(t), hs), mpf("0.999") + mpf("0.31") * mpf(t))
            assert encloses(w(Interval(1.0), Interval(t), hs), mpf("0.999") + mpf("0.31") * mpf(t))

    def test_w_at_origin(self, table):
        hs = HarmonicSum.from_row(ConeParams.from_c(Interval(0.35)), table.get_row("2"))
        assert encloses(w(Interval(0.0), Interval(0.2), hs), mpf("0.19"))

    def test_gradient_row_one_at_c_zero(self, table):
        # w = 0.999 + 0.31 x4 on the flat cone
        hs = HarmonicSum.from_row(ConeParams.from_c(Interval(0.0)), table.get_row("1"))
        value = grad_sq_w(Interval(0.5), Interval(-0.4), hs)
        assert encloses(value, mpf("0.31") ** 2)

    def test_negative_radius(self, table):
        hs = HarmonicSum.from_row(ConeParams.from_c(Interval(0.1)), table.get_row("1"))
        with pytest.raises(DomainError):
            w(Interval(-0.1, 0.1), Interval(0.0), hs)

    def test_unknown_field(self, table):
        hs = HarmonicSum.from_row(ConeParams.from_c(Interval(0.1)), table.get_row("1"))
        with pytest.raises(ValueError):
            grad_sq("u", Interval(0.5), Interval(0.0), hs)


class TestV:
    """Tests for v = r kappa f + epsilon r^(-1/2) g."""

    def test_v_scaled_at_origin_is_epsilon_g(self, table):
        params = ConeParams.from_c(Interval(0.0))
        hs = HarmonicSum.from_row(params, table.get_row("1"))
        kappa = normalization(params.beta)
        value = v_scaled(Interval(0.0), Interval(1.0), hs, kappa)
        assert encloses(value, mpf("0.2"))

    def test_grad_v_needs_positive_radius(self, table):
        hs = HarmonicSum.from_row(ConeParams.from_c(Interval(0.1)), table.get_row("1"))
        with pytest.raises(DomainError):
            grad_sq("v", Interval(0.0, 0.5), Interval(0.0), hs)

    def test_small_radius(self):
        # (epsilon / (8 kappa))^(2/3) with epsilon = 0.8, kappa = 0.1
        assert small_radius(Interval(0.8), Interval(0.1)).contains(1.0)


class TestCrossPoint:
    """Tests for the verified cross point."""

    def test_interior_cross_point(self, table):
        row = table.get_row("2")
        cross = find_cross_point(row, Interval(0.35))
        assert not cross.on_sphere
        assert cross.root.verified
        assert 0.0 < float(cross.r.lo) and float(cross.r.hi) < 1.0
        params = ConeParams.from_c(Interval(0.35))
        hs = HarmonicSum.from_row(params, row)
        kappa = normalization(params.beta)
        assert w(cross.r, cross.t, hs).contains(0.0)
        assert v_scaled(cross.r, cross.t, hs, kappa).contains(0.0)

    def test_sphere_fallback_row_one(self, table):
        cross = find_cross_point(table.get_row("1"), Interval(0.1))
        assert cross.on_sphere
        assert cross.r.to_pair() == (1.0, 1.0)
        assert cross.to_dict()["on_sphere"] is True


    def test_zero_epsilon_collapses_to_t_c(self):
        cross = find_cross_point(FLAT_ROW, Interval(0.1))
        assert cross.on_sphere
        assert cross.root.verified
        assert bool(cross.t.overlaps(find_t_c(Interval(0.1)).interval))
        assert float(cross.t.width) < 1e-10


class TestCondition1:
    """Tests for the boundary comparison."""

    def test_t_edges_include_floor(self):
        edges = t_edges(10, -0.95, 5)
        assert edges[0] == -1.0 and edges[-1] == 1.0
        assert -0.95 in edges
        assert np.all(np.diff(edges) > 0)

    @pytest.mark.slow
    def test_row_four_passes(self, table):
        row = table.get_row("4")
        certificate = verify_condition1(row, Interval(0.42, 0.43), n_t=200, n_beta=4, depth=6)
        assert certificate.verdict == Verdict.PASS
        assert certificate.claim_id == "row4/condition1"

    @pytest.mark.slow
    def test_row_one_above_floor(self, table):
        # w(1, -1) = 0.689 > 0, so cells below the floor stay excluded and the claim cannot pass
        certificate = verify_condition1(
            table.get_row("1"), Interval(0.0, 0.1), n_t=200, n_beta=40, depth=4
        )
        total = certificate.total
        assert not certificate.failed_cells
        assert not certificate.errors
        assert total.counts["pass"] > 0
        assert total.counts["excluded"] > 0
        assert all(cell.hi[0] <= -0.95 for cell in total.excluded)
        assert certificate.verdict == Verdict.INCONCLUSIVE

    def test_weak_row_fails(self):
        certificate = verify_condition1(WEAK_ROW, Interval(0.0, 0.1), n_t=40, n_beta=2, depth=2)
        assert certificate.verdict == Verdict.FAIL
        assert certificate.failed_cells

    def test_unlisted_subinterval(self, table):
        with pytest.raises(DomainError):
            verify_condition1(table.get_row("2"), Interval(0.3, 0.32), n_t=10, n_beta=1)


class TestQsFamilies:
    """Tests for the q_s comparison families."""

    def test_piecewise_continuity(self):
        assert all(item["continuous"] for item in piecewise_breaks())
        assert s1(1) == Fraction("1.5")
        assert s2(Fraction(7, 2)) == Fraction("0.75")

    def test_s2_sup(self):
        assert s2_sup() == Fraction("0.95")

    def test_negative_s(self):
        with pytest.raises(DomainError):
            s1(-1)

    def test_family_lookup(self):
        assert qs_family(QS_LINEAR_RANGE) == "linear"
        assert qs_family(("0.30", "0.4")) == "piecewise"
        with pytest.raises(DomainError):
            qs_family(("0", "0.4"))

    def test_linear_sums(self, table):
        task = QsTask("linear", "gradient", "harmonic", table.get_row("1"), 0.0, 0.1)
        params = ConeParams.from_c(Interval(0.0, 0.1))
        _, q, gradient = qs_sums(task, params)
        assert encloses(q.coefficients[0], mpf("0.22") * mpf("0.999"))
        assert encloses(gradient.coefficients[1], mpf("0.8") * mpf("0.31"))
        assert gradient.coefficients[0].to_pair() == (0.0, 0.0)

    def test_as_written_drops_radial_factors(self, table):
        task = QsTask("piecewise", "gradient", "as_written", table.get_row("2"), 0.3, 0.31)
        _, q, _ = qs_sums(task, ConeParams.from_c(Interval(0.3, 0.31)))
        assert not q.radial
        assert QS_PIECEWISE_RANGE == ("0.3", "0.4")


class TestCondition3:
    """Tests for the gradient bounds at the cross point."""

    @pytest.mark.slow
    def test_steep_row_fails(self):
        cross = find_cross_point(STEEP_ROW, Interval(0.05))
        assert not cross.on_sphere
        certificate = verify_condition3(STEEP_ROW, Interval(0.0, 0.1), pieces=1, depth=2)
        assert certificate.verdict == Verdict.FAIL
        assert certificate.failed_cells


class TestThreads:
    """Results do not depend on the worker count."""

    @pytest.mark.slow
    def test_serial_and_pool_agree(self):
        kwargs = dict(n_t=40, n_beta=2, depth=2, pieces=1)
        serial = verify_supersolution([WEAK_ROW], threads=1, **kwargs)
        pooled = verify_supersolution([WEAK_ROW], threads=2, **kwargs)
        assert [c.verdict for c in serial] == [c.verdict for c in pooled]
        assert [c.total.minimum for c in serial] == [c.total.minimum for c in pooled]
        assert [c.total.counts for c in serial] == [c.total.counts for c in pooled]
