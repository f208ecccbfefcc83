"""Tests for the critical cone parameter."""

import pytest

from cone_certify.critical import (
    PUBLISHED_C0,
    criterion,
    find_c0,
    find_c0_float,
    float_criterion,
    probe_uniqueness,
)
from cone_certify.errors import CertificationFailure, DomainError
from cone_certify.interval import Interval
from cone_certify.subsolution import boundary_identity


@pytest.fixture(scope="module")
def c0():
    return find_c0((0.5, 0.7), tol=1e-4)


class TestCriterion:
    """Tests for the balance between t_c and the slope of g."""

    def test_negative_below_c0(self):
        assert float(criterion(Interval(0.3)).diff.hi) < 0.0

    def test_positive_above_c0(self):
        assert float(criterion(Interval(0.7)).diff.lo) > 0.0

    def test_float_agrees_with_enclosure(self):
        value = criterion(Interval(0.55))
        assert float_criterion(0.55) == pytest.approx(float(value.diff.mid), abs=1e-9)


class TestFindC0:
    """Tests for the verified bisection."""

    def test_encloses_published_value(self, c0):
        assert float(c0.width) <= 1e-4
        assert abs(float(c0.mid) - PUBLISHED_C0) < 5e-4

    def test_float_estimate_inside_tolerance(self, c0):
        assert abs(find_c0_float() - float(c0.mid)) < 1e-4

    def test_narrow_search_nests(self, c0):
        narrow = find_c0((0.58, 0.60), tol=1e-6)
        assert float(narrow.width) <= 1e-6
        assert bool(narrow.overlaps(c0))
        assert float(c0.lo) - 1e-6 <= float(narrow.lo) and float(narrow.hi) <= float(c0.hi) + 1e-6

    def test_no_sign_change(self):
        with pytest.raises(CertificationFailure):
            find_c0((0.0, 0.3))

    def test_reversed_search(self):
        with pytest.raises(DomainError):
            find_c0((0.7, 0.5))

    def test_uniqueness_probe(self, c0):
        probe = probe_uniqueness(c0, (0.5, 0.7), n=11)
        assert probe.sign_coherent
        assert len(probe.samples) == len(probe.midpoints)


class TestBoundaryIdentity:
    """G(t_c) = 1 for the normalised solution."""

    @pytest.mark.parametrize("c", ["0", "0.3", "0.5"])
    def test_encloses_one(self, c):
        value = boundary_identity(Interval.from_text(c))
        assert value.contains(1.0)
        assert float(value.width) < 1e-6
