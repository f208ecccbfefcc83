"""
Root isolation: floating-point Newton for seeds, interval Newton for certificates.

The interval Newton operator N(X) = m - F(m) / F'(X), m = mid(X), maps any
root in X into N(X). Intersecting with X therefore never loses a root, an
empty intersection proves there is none, and N(X) strictly inside X proves
existence and uniqueness.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from .cone import ConeParams, one_minus_t_sq
from .errors import CertificationFailure, DomainError, NumericalError
from .interval import Interval, IntervalLike, as_interval, sqrt
from .legendre import eval_f, float_eval, truncation_index

logger = logging.getLogger(__name__)

DEFAULT_SEED_RADIUS = 1e-3
DEFAULT_FLOAT_ITERS = 10
DEFAULT_NEWTON_ITERS = 20
SEED_ATTEMPTS = 4
SEED_INFLATION = 4.0
ROOT_SPLIT_DEPTH = 6
T_C_SEED = -0.1


class RootStatus(str, Enum):
    VERIFIED_UNIQUE = "verified_unique"
    VERIFIED_CONTAINS = "verified_contains"
    NO_ROOT = "no_root"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class RootEnclosure:
    """Outcome of an interval Newton run."""

    interval: Interval
    status: RootStatus
    iterations: int

    @property
    def verified(self) -> bool:
        return self.status in (RootStatus.VERIFIED_UNIQUE, RootStatus.VERIFIED_CONTAINS)


@dataclass(frozen=True)
class BatchRootEnclosure:
    interval: Interval
    status: np.ndarray
    iterations: int

    @property
    def verified_mask(self) -> np.ndarray:
        return (self.status == RootStatus.VERIFIED_UNIQUE.value) | (
            self.status == RootStatus.VERIFIED_CONTAINS.value
        )

    @property
    def all_verified(self) -> bool:
        return bool(np.all(self.verified_mask))


def newton_float(
    fun: Callable, dfun: Callable, x0, iters: int = DEFAULT_FLOAT_ITERS
):
    """
    Plain Newton iteration on midpoint evaluators (scalars or arrays).

    Raises:
        NumericalError: If a derivative vanishes or an iterate is not finite
    """
    x = np.asarray(x0, dtype=np.float64)
    for _ in range(iters):
        d = np.asarray(dfun(x), dtype=np.float64)
        if np.any(d == 0):
            raise NumericalError(f"zero derivative at x = {x}")
        x = x - np.asarray(fun(x), dtype=np.float64) / d
        if not np.all(np.isfinite(x)):
            raise NumericalError("Newton iterate is not finite")
    return x if x.ndim else float(x)


def interval_newton_batch(
    fun: Callable[[Interval], Interval],
    dfun: Callable[[Interval], Interval],
    x0: IntervalLike,
    max_iters: int = DEFAULT_NEWTON_ITERS,
) -> BatchRootEnclosure:
    """Interval Newton applied elementwise to an array of starting intervals."""
    x = as_interval(x0)
    lo = np.array(x.lo, dtype=np.float64, copy=True)
    hi = np.array(x.hi, dtype=np.float64, copy=True)
    unique = np.zeros(lo.shape, dtype=bool)
    empty = np.zeros(lo.shape, dtype=bool)
    iterations = 0
    for step in range(max_iters):
        active = ~empty
        if not np.any(active):
            break
        box = Interval(lo, hi)
        derivative = dfun(box)
        bad = (derivative.lo <= 0) & (derivative.hi >= 0)
        m = box.mid
        fm = fun(Interval.point(m))
        safe = Interval(np.where(bad, 1.0, derivative.lo), np.where(bad, 1.0, derivative.hi))
        image = Interval.point(m) - fm / safe
        usable = active & ~bad
        new_lo = np.maximum(lo, image.lo)
        new_hi = np.minimum(hi, image.hi)
        now_empty = usable & (new_lo > new_hi)
        unique |= usable & (image.lo > lo) & (image.hi < hi)
        empty |= now_empty
        update = usable & ~now_empty
        changed = update & ((new_lo != lo) | (new_hi != hi))
        lo = np.where(update, new_lo, lo)
        hi = np.where(update, new_hi, hi)
        iterations = step + 1
        if not np.any(changed) and not np.any(now_empty):
            break

    status = np.full(lo.shape, RootStatus.INCONCLUSIVE.value, dtype=object)
    undecided = ~empty & ~unique
    if np.any(undecided):
        f_lo = fun(Interval.point(lo))
        f_hi = fun(Interval.point(hi))
        sign_change = ((f_lo.hi < 0) & (f_hi.lo > 0)) | ((f_lo.lo > 0) & (f_hi.hi < 0))
        status = np.where(undecided & sign_change, RootStatus.VERIFIED_CONTAINS.value, status)
    status = np.where(unique, RootStatus.VERIFIED_UNIQUE.value, status)
    status = np.where(empty, RootStatus.NO_ROOT.value, status)
    return BatchRootEnclosure(interval=Interval(lo, hi), status=status, iterations=iterations)


def interval_newton(
    fun: Callable[[Interval], Interval],
    dfun: Callable[[Interval], Interval],
    x0: IntervalLike,
    max_iters: int = DEFAULT_NEWTON_ITERS,
) -> RootEnclosure:
    """
    Certify a root of ``fun`` in ``x0``.

    Args:
        fun: Sound enclosure of the function
        dfun: Sound enclosure of its derivative
        x0: Starting interval
        max_iters: Iteration limit

    Returns:
        RootEnclosure; inconclusive is a status, not an error
    """
    batch = interval_newton_batch(fun, dfun, x0, max_iters)
    return RootEnclosure(
        interval=batch.interval,
        status=RootStatus(str(np.asarray(batch.status).reshape(-1)[0])),
        iterations=batch.iterations,
    )


def _series_pair(beta: Interval, k: int) -> Tuple[Callable, Callable]:
    def fun(t: Interval) -> Interval:
        return eval_f(t, beta, 0, k).value

    def dfun(t: Interval) -> Interval:
        return eval_f(t, beta, 1, k).value

    return fun, dfun


def _float_roots(beta_points: np.ndarray, seed: float = T_C_SEED) -> np.ndarray:
    return np.asarray(
        newton_float(
            lambda t: float_eval(t, beta_points, 0),
            lambda t: float_eval(t, beta_points, 1),
            np.full(np.shape(beta_points), seed),
        )
    )


def find_roots_batch(
    beta: Interval,
    seed_radius: float = DEFAULT_SEED_RADIUS,
    max_iters: int = DEFAULT_NEWTON_ITERS,
    split_depth: int = ROOT_SPLIT_DEPTH,
) -> BatchRootEnclosure:
    """
    Enclose the zero t of f(., beta) in (-1, 1) for every beta cell of an array.

    Cells interval Newton cannot verify from the float seed are retried with
    the seed radius inflated, then split in beta; a split cell reports the
    hull of its halves' enclosures as ``verified_contains``.

    Raises:
        CertificationFailure: If any cell is not verified
    """
    result = _seeded_newton(beta, seed_radius, max_iters)
    if result.all_verified:
        return result
    shape = beta.shape
    lo = result.interval.lo.reshape(-1).copy()
    hi = result.interval.hi.reshape(-1).copy()
    status = result.status.reshape(-1).copy()
    failing = np.flatnonzero(~result.verified_mask.reshape(-1))
    if split_depth <= 0:
        raise CertificationFailure(f"t_c not verified for {failing.size} beta cells")
    cells = Interval(beta.lo.reshape(-1)[failing], beta.hi.reshape(-1)[failing])
    mid = 0.5 * cells.lo + 0.5 * cells.hi
    if np.any((mid <= cells.lo) | (mid >= cells.hi)):
        raise CertificationFailure(f"t_c not verified for {failing.size} beta cells")
    logger.debug("t_c: splitting %d beta cells (%d splits left)", failing.size, split_depth)
    halves = Interval(np.concatenate([cells.lo, mid]), np.concatenate([mid, cells.hi]))
    sub = find_roots_batch(halves, seed_radius, max_iters, split_depth - 1).interval
    n = failing.size
    merged = sub[:n].hull(sub[n:])
    lo[failing], hi[failing] = merged.lo, merged.hi
    status[failing] = RootStatus.VERIFIED_CONTAINS.value
    return BatchRootEnclosure(
        interval=Interval(lo.reshape(shape), hi.reshape(shape)),
        status=status.reshape(shape),
        iterations=result.iterations,
    )


def _seeded_newton(beta: Interval, seed_radius: float, max_iters: int) -> BatchRootEnclosure:
    """Interval Newton from float seeds, inflating the seed radius for cells left unverified."""
    shape = beta.shape
    flat = Interval(beta.lo.reshape(-1), beta.hi.reshape(-1))
    try:
        left = _float_roots(flat.lo)
        right = _float_roots(flat.hi)
    except NumericalError as e:
        raise CertificationFailure(f"float Newton failed while seeding t_c: {e}")
    centre = 0.5 * (left + right)
    spread = 0.5 * np.abs(left - right)
    lo = np.full(flat.shape, -0.99)
    hi = np.full(flat.shape, 0.99)
    status = np.full(flat.shape, RootStatus.INCONCLUSIVE.value, dtype=object)
    todo = np.arange(flat.shape[0])
    iterations = 0
    radius = seed_radius
    for _ in range(SEED_ATTEMPTS):
        cells = flat[todo]
        seed = Interval(
            np.maximum(centre[todo] - radius - spread[todo], -0.99),
            np.minimum(centre[todo] + radius + spread[todo], 0.99),
        )
        k = truncation_index(float(np.min(seed.lo)))
        fun, dfun = _series_pair(cells, k)
        result = interval_newton_batch(fun, dfun, seed, max_iters)
        iterations = max(iterations, result.iterations)
        lo[todo], hi[todo] = result.interval.lo, result.interval.hi
        status[todo] = result.status
        todo = todo[~result.verified_mask]
        if not todo.size:
            break
        radius *= SEED_INFLATION
        logger.debug("t_c: %d cells unverified, seed radius now %g", todo.size, radius)
    return BatchRootEnclosure(
        interval=Interval(lo.reshape(shape), hi.reshape(shape)),
        status=status.reshape(shape),
        iterations=iterations,
    )


def find_t_c(
    c: IntervalLike, seed_radius: float = DEFAULT_SEED_RADIUS, max_iters: int = DEFAULT_NEWTON_ITERS
) -> RootEnclosure:
    """
    Verified enclosure of t_c, the zero of f(., beta_c), valid for every c in ``c``.

    Args:
        c: Cone parameter (point or interval) within [0, 1]
        seed_radius: Radius added to the float Newton spread when seeding
        max_iters: Interval Newton iteration limit

    Returns:
        RootEnclosure with a verified status

    Raises:
        DomainError: If c leaves [0, 1]
        CertificationFailure: If interval Newton does not verify the root
    """
    c = as_interval(c)
    if np.any(c.lo < 0) or np.any(c.hi > 1.0):
        raise DomainError(f"t_c is only computed for c in [0, 1], got {c!r}")
    beta = ConeParams.from_c(c).beta
    result = find_roots_batch(beta, seed_radius, max_iters)
    enclosure = RootEnclosure(
        interval=result.interval,
        status=RootStatus(str(np.asarray(result.status).reshape(-1)[0])),
        iterations=result.iterations,
    )
    logger.debug("t_c for c=%r: %r (%s)", c, enclosure.interval, enclosure.status.value)
    return enclosure


def normalization(beta: Interval, roots: Optional[Interval] = None) -> Interval:
    """
    kappa = 1 / (sqrt(1 - t_c^2) |f'(t_c)|) for every beta cell.

    kappa f has unit cone gradient on its zero set; sign-only quantities do
    not need it.
    """
    beta = as_interval(beta)
    t_c = roots if roots is not None else find_roots_batch(beta).interval
    k = truncation_index(float(np.min(t_c.lo)))
    slope = abs(eval_f(t_c, beta, 1, k).value)
    return 1.0 / (sqrt(one_minus_t_sq(t_c)) * slope)
