"""
The critical cone parameter c0.

At c0 the zero t_c of f_c balances the logarithmic slope of g_c:

    |t_c| / (1 - t_c^2) = |g'(t_c)| / g(t_c)

Below c0 the left side is smaller. ``find_c0`` encloses c0 by bisection on
the certified sign of the difference.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from numpy.polynomial import Chebyshev

from .cone import ConeParams, one_minus_t_sq
from .errors import CertificationFailure, DomainError, NumericalError
from .interval import Interval, IntervalLike, as_interval
from .legendre import eval_g, float_eval, float_eval_g, truncation_index
from .roots import RootEnclosure, T_C_SEED, find_t_c, newton_float

logger = logging.getLogger(__name__)

DEFAULT_SEARCH = (0.5, 0.7)
DEFAULT_TOL = 1e-6
PUBLISHED_C0 = 0.5884


@dataclass(frozen=True)
class CriterionValue:
    c: Interval
    t_c: RootEnclosure
    lhs: Interval
    rhs: Interval
    diff: Interval


@dataclass
class UniquenessProbe:
    """Sign coherence of the criterion around a c0 enclosure (reported, not proven)."""

    samples: List[float] = field(default_factory=list)
    midpoints: List[float] = field(default_factory=list)
    sign_coherent: bool = True
    monotone: bool = True


def criterion(c: IntervalLike) -> CriterionValue:
    """
    Enclose both sides of the criterion and their difference.

    Raises:
        CertificationFailure: If t_c cannot be enclosed or g is not positive there
    """
    c = as_interval(c)
    beta = ConeParams.from_c(c).beta
    root = find_t_c(c)
    t = root.interval
    k = truncation_index(float(t.lo))
    g = eval_g(t, beta, 0, k).value
    dg = eval_g(t, beta, 1, k).value
    if np.any(g.lo <= 0):
        raise CertificationFailure(f"g is not certified positive at t_c for c={c!r}")
    lhs = abs(t) / one_minus_t_sq(t)
    rhs = abs(dg) / g
    return CriterionValue(c=c, t_c=root, lhs=lhs, rhs=rhs, diff=lhs - rhs)


def _sign(c: float) -> int:
    diff = criterion(Interval(c)).diff
    if diff.hi < 0:
        return -1
    if diff.lo > 0:
        return 1
    return 0


def find_c0(search: Tuple[float, float] = DEFAULT_SEARCH, tol: float = DEFAULT_TOL) -> Interval:
    """
    Enclose c0 by verified bisection.

    Args:
        search: (a, b) with a sign change of the criterion difference
        tol: Target enclosure width

    Returns:
        Interval [a', b'] of width <= tol containing a zero of the difference

    Raises:
        CertificationFailure: If no certified sign change exists on ``search``
            or a sign cannot be resolved before reaching ``tol``
    """
    a, b = float(search[0]), float(search[1])
    if not a < b:
        raise DomainError(f"search interval must satisfy a < b, got {search}")
    sign_a, sign_b = _sign(a), _sign(b)
    if sign_a == 0 or sign_b == 0 or sign_a == sign_b:
        raise CertificationFailure(
            f"no certified sign change of the criterion on [{a}, {b}] (signs {sign_a}, {sign_b})"
        )
    steps = 0
    while b - a > tol:
        width = b - a
        for fraction in (0.5, 0.25, 0.75):
            m = a + fraction * width
            if not a < m < b:
                continue
            s = _sign(m)
            if s == sign_a:
                a = m
                break
            if s == sign_b:
                b = m
                break
        else:
            raise CertificationFailure(f"criterion sign unresolved inside [{a}, {b}]")
        steps += 1
    logger.info("c0 enclosed in [%r, %r] after %d bisection steps", a, b, steps)
    return Interval(a, b)


def _float_t_c(c: float) -> float:
    beta = 2.0 / (1.0 + c * c)
    return float(
        newton_float(lambda t: float_eval(t, beta, 0), lambda t: float_eval(t, beta, 1), T_C_SEED)
    )


def float_criterion(c: float) -> float:
    """Non-rigorous criterion difference at a point c."""
    beta = 2.0 / (1.0 + c * c)
    t = _float_t_c(c)
    g = float(float_eval_g(t, beta, 0))
    dg = float(float_eval_g(t, beta, 1))
    return abs(t) / (1.0 - t * t) - abs(dg) / g


def find_c0_float(search: Tuple[float, float] = DEFAULT_SEARCH, degree: int = 24) -> float:
    """
    Interpolate b(c) = t_c, then root-find the criterion through the interpolant.

    No rigor is claimed; used to compare against ``find_c0``.

    Raises:
        NumericalError: If no root is found inside ``search``
    """
    domain = [float(search[0]), float(search[1])]
    b = Chebyshev.interpolate(np.vectorize(_float_t_c), degree, domain=domain)

    def difference(c):
        c = np.asarray(c, dtype=np.float64)
        beta = 2.0 / (1.0 + c * c)
        t = b(c)
        g = float_eval_g(t, beta, 0)
        dg = float_eval_g(t, beta, 1)
        return np.abs(t) / (1.0 - t * t) - np.abs(dg) / g

    d = Chebyshev.interpolate(difference, degree, domain=domain)
    roots = [r.real for r in d.roots() if abs(r.imag) < 1e-12 and domain[0] <= r.real <= domain[1]]
    if not roots:
        raise NumericalError(f"no float root of the criterion in {domain}")
    return float(min(roots, key=lambda r: abs(d(r))))


def probe_uniqueness(
    enclosure: Interval, search: Tuple[float, float] = DEFAULT_SEARCH, n: int = 21
) -> UniquenessProbe:
    """Sample the criterion on ``search`` and check signs and midpoint monotonicity."""
    probe = UniquenessProbe()
    for c in np.linspace(search[0], search[1], n):
        c = float(c)
        if enclosure.lo <= c <= enclosure.hi:
            continue
        diff = criterion(Interval(c)).diff
        probe.samples.append(c)
        probe.midpoints.append(float(diff.mid))
        if c < enclosure.lo and not diff.hi < 0:
            probe.sign_coherent = False
        if c > enclosure.hi and not diff.lo > 0:
            probe.sign_coherent = False
    probe.monotone = bool(np.all(np.diff(probe.midpoints) > 0))
    return probe
