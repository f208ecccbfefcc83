"""
Rigorous Legendre-function enclosures.

f(t, beta) is the solution of (1 - t^2) f'' - 2t f' + beta f = 0 regular at
t = 1, normalised by f(1) = 1, written as a power series in u = 1 - t:

    f = sum_n a_n u^n,    a_0 = 1,    a_{n+1} = a_n (n^2 + n - beta) / (2 (n+1)^2)

g(t, beta) = f(t, -beta/8) is its companion solution.

Every enclosure is a partial sum evaluated in interval arithmetic and widened
by a proven bound on the tail. Two tail bounds exist:

* for beta in [-2, 2] and t > -1, |a_n| <= 2^(1-n) |a_0|;
* for |beta| <= k + 1, |a_n| <= |a_k| 2^(k-n) when n >= k, valid for any u with
  |u| < 2 (complex arguments included).

Both reduce to a constant times a derivative of the geometric majorant
u^N / (2 - u), N = k + 1, which is what ``_majorant_derivative`` evaluates.

Coefficients decay like 2^-n and u^n grows like 2^n near t = -1, so both
are carried scaled: b_n = 2^n a_n and v = u / 2. Sums and tails are formed
in (b, v), which keeps every intermediate inside the binary64 range for the
truncation indices (up to a few thousand) needed close to t = -1.
"""

import functools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import BoundUnavailable, DomainError
from .interval import ONE, Interval, IntervalLike, as_interval, powi

logger = logging.getLogger(__name__)

DEFAULT_K = 60
MAX_K = 4000
GEOMETRIC_BETA_RANGE = (-2.0, 2.0)
T_BAND = 0.05


@dataclass(frozen=True)
class SeriesCoeffs:
    """
    Enclosures of the coefficients for every beta in ``beta``.

    ``scaled`` holds b_0..b_k, b_n = 2^n a_n, with a leading axis n; ``a``
    and indexing give the unscaled a_n.
    """

    beta: Interval
    k: int
    scaled: Interval

    @property
    def a(self) -> Interval:
        exponents = -np.arange(self.k + 1).reshape((-1,) + (1,) * self.beta.lo.ndim)
        return _ldexp(self.scaled, exponents)

    def __getitem__(self, n: int) -> Interval:
        return _ldexp(self.scaled[n], -n)


def _ldexp(x: Interval, e) -> Interval:
    """x * 2^e, widened by one subnormal step wherever the scaling underflows."""
    lo = np.ldexp(x.lo, e)
    hi = np.ldexp(x.hi, e)
    tiny = np.finfo(np.float64).tiny
    lo = np.where((x.lo != 0) & (np.abs(lo) < tiny), np.nextafter(lo, -np.inf), lo)
    hi = np.where((x.hi != 0) & (np.abs(hi) < tiny), np.nextafter(hi, np.inf), hi)
    # scaling keeps the sign, so positive stays non-negative
    lo = np.where(x.lo > 0, np.maximum(lo, 0.0), lo)
    hi = np.where(x.hi < 0, np.minimum(hi, 0.0), hi)
    return Interval(lo, hi)


@dataclass(frozen=True)
class SeriesEval:
    """Enclosure of f^(j) over an input box: partial sum widened by the tail bound."""

    value: Interval
    derivative_order: int
    truncation_index: int
    tail_bound: np.ndarray


def falling(n: int, j: int) -> int:
    """Falling factorial n (n-1) ... (n-j+1); zero when j > n."""
    if j > n:
        return 0
    result = 1
    for i in range(j):
        result *= n - i
    return result


def coeffs(beta: IntervalLike, k: int) -> SeriesCoeffs:
    """Series coefficients a_0..a_k by the recursion, in interval arithmetic."""
    if k < 0:
        raise ValueError(f"truncation index must be non-negative, got {k}")
    beta = as_interval(beta)
    lo = np.empty((k + 1,) + beta.shape)
    hi = np.empty((k + 1,) + beta.shape)
    b_n = Interval.point(np.ones(beta.shape))
    lo[0], hi[0] = b_n.lo, b_n.hi
    for n in range(k):
        # b_{n+1} = 2^(n+1) a_{n+1} = b_n (n^2 + n - beta) / (n+1)^2
        b_n = b_n * (float(n * n + n) - beta) / float((n + 1) ** 2)
        lo[n + 1], hi[n + 1] = b_n.lo, b_n.hi
    return SeriesCoeffs(beta=beta, k=k, scaled=Interval(lo, hi))


def coefficient_majorants(bound: float, k: int) -> np.ndarray:
    """
    Upper bounds A_n >= |a_n(beta)| for every complex beta with |beta| <= bound.

    Args:
        bound: Modulus bound B on beta
        k: Last index required

    Returns:
        Array of k + 1 upper bounds
    """
    out = np.empty(k + 1)
    current = ONE
    out[0] = 1.0
    for n in range(k):
        current = current * (float(n * n + n) + Interval.point(bound)) / float(2 * (n + 1) ** 2)
        out[n + 1] = float(current.hi)
    return out


def _majorant_derivative(u: Interval, n_start: int, j: int) -> Interval:
    """
    2^-N times the j-th u-derivative of u^N / (2 - u).

    That is sum_i C(j,i) N^(j-i) i! 2^(i-j) v^(N-j+i) / (2-u)^(1+i) with v = u/2.
    """
    total = Interval.point(np.zeros(u.shape))
    v = u * 0.5
    two_minus_u = 2.0 - u
    for i in range(j + 1):
        power = n_start - j + i
        fall = falling(n_start, j - i)
        if fall == 0 or power < 0:
            continue
        factor = math.ldexp(float(math.comb(j, i) * fall * math.factorial(i)), i - j)
        total = total + factor * powi(v, power) / powi(two_minus_u, 1 + i)
    return total


def tail_bound(
    t: IntervalLike, beta: IntervalLike, j: int, k: int, b_k: Optional[Interval] = None
) -> np.ndarray:
    """
    Bound on |f^(j) - partial sum of degree k| over the (t, beta) box.

    Uses the tighter of the two admissible bounds elementwise. ``b_k`` is the
    scaled last coefficient 2^k a_k when the caller already has it.

    Raises:
        BoundUnavailable: If neither bound applies to some element
    """
    t = as_interval(t)
    beta = as_interval(beta)
    u_sup = (1.0 - t).mag
    n_start = k + 1

    lo, hi = GEOMETRIC_BETA_RANGE
    geometric_ok = (beta.lo >= lo) & (beta.hi <= hi) & (t.lo > -1.0)
    ratio_ok = (beta.mag <= float(n_start)) & (u_sup < 2.0)
    usable = np.broadcast_to(geometric_ok | ratio_ok, np.broadcast(geometric_ok, ratio_ok).shape)
    if not np.all(usable):
        raise BoundUnavailable(
            f"no tail bound for derivative {j} at k={k}: need beta in [-2, 2] with t > -1, "
            f"or |beta| <= k+1 with |1-t| < 2"
        )

    # Clamp u where a path is unusable so the majorant stays finite; the mask discards it.
    u_safe = np.where(u_sup < 2.0, u_sup, 0.0)
    shape = np.broadcast(u_safe, beta.lo).shape
    majorant = _majorant_derivative(Interval.point(np.broadcast_to(u_safe, shape)), n_start, j).hi

    # |b_n| <= 2 on the first path; |b_n| <= |b_k| for n >= k on the second
    geometric = np.where(geometric_ok, (4.0 * Interval.point(majorant)).hi, np.inf)
    if b_k is None:
        b_k = coeffs(beta, k).scaled[k]
    ratio = np.where(
        ratio_ok, (2.0 * Interval.point(b_k.mag) * Interval.point(majorant)).hi, np.inf
    )
    return np.minimum(geometric, ratio)


def _partial_sum(v: Interval, b: Interval, j: int, k: int) -> Interval:
    """(-1)^j 2^-j sum_{n=j..k} n^(j) b_n v^(n-j) by Horner in v = u / 2."""
    acc = Interval.point(np.zeros(np.broadcast(v.lo, b.lo[0]).shape))
    for n in range(k, j - 1, -1):
        acc = acc * v + float(falling(n, j)) * b[n]
    acc = acc * math.ldexp(1.0, -j)
    return -acc if j % 2 else acc


def eval_f(t: IntervalLike, beta: IntervalLike, j: int = 0, k: int = DEFAULT_K) -> SeriesEval:
    """
    Enclosure of the j-th t-derivative of f over the box t x beta.

    Args:
        t: Interval (or array of intervals) of arguments
        beta: Interval of parameters, broadcastable with t
        j: Derivative order, 0..2
        k: Truncation index

    Returns:
        SeriesEval whose value contains f^(j)(t, beta) for every point of the box

    Raises:
        BoundUnavailable: If neither tail bound applies
    """
    if j not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {j}")
    t = as_interval(t)
    beta = as_interval(beta)
    series = coeffs(beta, k)
    return _evaluate(t, series, j)


def _evaluate(t: Interval, series: SeriesCoeffs, j: int) -> SeriesEval:
    k = series.k
    tail = tail_bound(t, series.beta, j, k, b_k=series.scaled[k])
    v = (1.0 - t) * 0.5
    value = _partial_sum(v, series.scaled, j, k)
    value = value + Interval(-tail, tail)
    return SeriesEval(value=value, derivative_order=j, truncation_index=k, tail_bound=tail)


def eval_all(t: IntervalLike, beta: IntervalLike, k: int = DEFAULT_K) -> Tuple[Interval, Interval, Interval]:
    """f, f' and f'' over the box, sharing one coefficient computation."""
    t = as_interval(t)
    series = coeffs(beta, k)
    return tuple(_evaluate(t, series, j).value for j in (0, 1, 2))  # type: ignore[return-value]


def eval_g(t: IntervalLike, beta: IntervalLike, j: int = 0, k: int = DEFAULT_K) -> SeriesEval:
    """Enclosure of g^(j)(t, beta) = f^(j)(t, -beta/8)."""
    return eval_f(t, g_parameter(beta), j, k)


def eval_g_all(
    t: IntervalLike, beta: IntervalLike, k: int = DEFAULT_K
) -> Tuple[Interval, Interval, Interval]:
    return eval_all(t, g_parameter(beta), k)


def g_parameter(beta: IntervalLike) -> Interval:
    """-beta/8, exact for binary64 endpoints."""
    return -as_interval(beta) / 8.0


def check_g_geq_one(beta: IntervalLike) -> bool:
    """
    Certify g(t, beta) >= 1 on [-1, 1] for every beta in ``beta``.

    This is a coefficient-sign argument, not an enclosure check: no value of
    g is evaluated. All coefficients a_n(-beta/8) are positive: a_1 = beta/16 > 0
    and each recursion factor (n^2 + n + beta/8) / (2 (n+1)^2) is positive for
    n >= 1, so g = 1 + sum_{n>=1} a_n (1-t)^n >= 1 wherever the series converges.

    Raises:
        DomainError: If beta is not contained in [3/2, 2]
    """
    beta = as_interval(beta)
    if not bool(np.all(beta.subset(Interval(1.5, 2.0)))):
        raise DomainError(f"check_g_geq_one needs beta within [1.5, 2], got {beta!r}")
    a_1 = beta / 16.0
    # factor numerator is increasing in n, so n = 1 is the binding step
    step = 2.0 + beta / 8.0
    certified = bool(np.all(a_1.lo > 0)) and bool(np.all(step.lo > 0))
    logger.debug("g >= 1 certificate for %r: %s", beta, certified)
    return certified


@functools.lru_cache(maxsize=None)
def truncation_index(t_lo: float, tol: float = 1e-12, j_max: int = 2) -> int:
    """
    Smallest k >= DEFAULT_K whose first-path tail bound at t_lo is <= tol for all j <= j_max.

    Raises:
        BoundUnavailable: If t_lo <= -1 or no k up to MAX_K suffices
    """
    if t_lo <= -1.0:
        raise BoundUnavailable(f"series tail diverges at t = {t_lo}")
    u = max(1.0 - t_lo, 0.0)
    if u == 0.0:
        return DEFAULT_K
    log_tol = math.log(tol)
    for k in range(DEFAULT_K, MAX_K + 1):
        n_start = k + 1
        worst = -math.inf
        for j in range(j_max + 1):
            terms = []
            for i in range(j + 1):
                fall = falling(n_start, j - i)
                if fall == 0:
                    continue
                terms.append(
                    math.log(math.comb(j, i) * fall * math.factorial(i))
                    + (n_start - j + i) * math.log(u)
                    - (1 + i) * math.log(2.0 - u)
                )
            if terms:
                m = max(terms)
                worst = max(worst, m + math.log(sum(math.exp(x - m) for x in terms)))
        if (1 - k) * math.log(2.0) + worst <= log_tol:
            return k
    raise BoundUnavailable(f"no truncation index up to {MAX_K} reaches {tol} at t = {t_lo}")


def band_indices(t_lo, t_min: float, band: float = T_BAND) -> np.ndarray:
    """
    Truncation index per cell, chosen at the lower edge of the t-band holding t_lo.

    Bands are ``band`` wide and clamped below at ``t_min``, so a sweep over
    thousands of cells needs only a handful of distinct indices.
    """
    t_lo = np.asarray(t_lo, dtype=np.float64)
    edges = np.maximum(np.floor(t_lo / band) * band, t_min)
    unique, inverse = np.unique(edges, return_inverse=True)
    ks = np.array([truncation_index(float(edge)) for edge in unique], dtype=np.int64)
    return ks[inverse].reshape(t_lo.shape)


def eval_f_banded(
    t: IntervalLike, beta: IntervalLike, j: int = 0, t_min: float = -0.95
) -> Interval:
    """
    Enclosure of f^(j) over each cell of t x beta, with the truncation index picked per t-band.

    Cells near t = 1 get a short series and cells near ``t_min`` a long one.
    """
    t = as_interval(t)
    beta = as_interval(beta)
    shape = np.broadcast(t.lo, beta.lo).shape
    if shape == ():
        return eval_f(t, beta, j, truncation_index(max(float(t.lo), t_min))).value
    t = Interval._make(np.broadcast_to(t.lo, shape), np.broadcast_to(t.hi, shape))
    beta = Interval._make(np.broadcast_to(beta.lo, shape), np.broadcast_to(beta.hi, shape))
    ks = band_indices(t.lo, t_min)
    lo = np.empty(shape)
    hi = np.empty(shape)
    for k in np.unique(ks):
        mask = ks == k
        part = eval_f(t[mask], beta[mask], j, int(k)).value
        lo[mask], hi[mask] = part.lo, part.hi
    return Interval._make(lo, hi)


def eval_g_banded(
    t: IntervalLike, beta: IntervalLike, j: int = 0, t_min: float = -0.95
) -> Interval:
    """Banded enclosure of g^(j)(t, beta) = f^(j)(t, -beta/8)."""
    return eval_f_banded(t, g_parameter(beta), j, t_min)


def float_eval(t, beta, j: int = 0, k: int = DEFAULT_K) -> np.ndarray:
    """Non-rigorous vectorised f^(j)(t, beta) in scaled form, like the enclosures."""
    t = np.asarray(t, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    v = (1.0 - t) * 0.5
    b = np.ones(beta.shape)
    coefficients = [b]
    for n in range(k):
        b = b * (n * n + n - beta) / float((n + 1) ** 2)
        coefficients.append(b)
    acc = np.zeros(np.broadcast(v, beta).shape)
    for n in range(k, j - 1, -1):
        acc = acc * v + falling(n, j) * coefficients[n]
    acc = acc * 0.5**j
    return -acc if j % 2 else acc


def float_eval_g(t, beta, j: int = 0, k: int = DEFAULT_K) -> np.ndarray:
    return float_eval(t, -np.asarray(beta, dtype=np.float64) / 8.0, j, k)
