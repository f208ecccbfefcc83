"""
Interval arithmetic with outward rounding.

Endpoints are float64 numpy arrays (0-d for scalars), so the same value type
serves single proofs and vectorised grid sweeps through broadcasting.

Directed rounding never touches the process rounding mode. Every result is
computed in round-to-nearest and then adjusted with ``numpy.nextafter``.
Error-free transformations (TwoSum, Veltkamp/Dekker TwoProduct) decide the
direction of the rounding error, so exact results stay exact and inexact ones
cost at most one ulp on each side.
"""

import math
from fractions import Fraction
from typing import Callable, Dict, Tuple, Union

import numpy as np

from .errors import DomainError, EmptyIntersection

_NEG_INF = -np.inf
_POS_INF = np.inf
_MAX = float(np.finfo(np.float64).max)

# TwoProduct is exact while both operands lie in [2**-480, 2**480].
_SPLITTER = 134217729.0
_EXACT_LO = 2.0**-480
_EXACT_HI = 2.0**480

# Width of exp/ln enclosures of point arguments, in ulps of the midpoint.
EXP_LN_WIDTH_ULPS = 64

_EXP_TERMS = 20
_LOG_TERMS = 14
_TRIG_TERMS = 12
_EXP_MAX_ARG = 709.0
_EXP_MIN_ARG = -700.0
# exp(-700) < 2**-1009
_EXP_UNDERFLOW_BOUND = 2.0**-1009


def _down(x):
    return np.nextafter(x, _NEG_INF)


def _up(x):
    return np.nextafter(x, _POS_INF)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _add_down(a, b):
    s, err = _two_sum(a, b)
    out = np.where(err < 0, _down(s), s)
    return np.where(np.isposinf(out) & np.isfinite(a) & np.isfinite(b), _MAX, out)


def _add_up(a, b):
    s, err = _two_sum(a, b)
    out = np.where(err > 0, _up(s), s)
    return np.where(np.isneginf(out) & np.isfinite(a) & np.isfinite(b), -_MAX, out)


def _split(a):
    c = _SPLITTER * a
    high = c - (c - a)
    return high, a - high


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _in_exact_range(a):
    m = np.abs(a)
    return (m >= _EXACT_LO) & (m < _EXACT_HI)


def _mul_bounds(a, b):
    """Lower and upper bounds of the exact product a*b."""
    p, err = _two_prod(a, b)
    ok = (a == 0) | (b == 0) | (_in_exact_range(a) & _in_exact_range(b))
    lo = np.where(ok & (err >= 0), p, _down(p))
    hi = np.where(ok & (err <= 0), p, _up(p))
    return lo, hi


def _div_bounds(a, b):
    """Lower and upper bounds of the exact quotient a/b, b != 0."""
    q = a / b
    p, err = _two_prod(q, b)
    # a - p is exact (Sterbenz), so the sign below is the sign of a/b - q.
    sign = np.sign((a - p) - err) * np.sign(b)
    ok = (a == 0) | (_in_exact_range(a) & _in_exact_range(b) & _in_exact_range(q))
    lo = np.where(ok & (sign >= 0), q, _down(q))
    hi = np.where(ok & (sign <= 0), q, _up(q))
    return lo, hi


def _sqrt_bounds(a):
    s = np.sqrt(a)
    p, err = _two_prod(s, s)
    sign = np.sign((a - p) - err)
    ok = (a == 0) | _in_exact_range(a)
    lo = np.where(ok & (sign >= 0), s, _down(s))
    hi = np.where(ok & (sign <= 0), s, _up(s))
    return np.maximum(lo, 0.0), hi


class Interval:
    """
    Closed interval [lo, hi] of binary64 numbers.

    For every operation and all reals x in X, y in Y the exact result of the
    operation on (x, y) lies in the interval result. Instances are treated
    as immutable and may be shared between workers.

    Examples:
        >>> Interval(1, 2) + Interval(3, 4)
        Interval(4.0, 6.0)
        >>> Interval.from_text("0.1").contains(0.1)
        True
    """

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000

    def __init__(self, lo, hi=None):
        lo_arr = np.asarray(lo, dtype=np.float64)
        hi_arr = lo_arr if hi is None else np.asarray(hi, dtype=np.float64)
        if np.any(np.isnan(lo_arr)) or np.any(np.isnan(hi_arr)):
            raise DomainError("Interval endpoint is NaN")
        if np.any(lo_arr > hi_arr):
            raise DomainError(f"Interval endpoints out of order: lo={lo_arr}, hi={hi_arr}")
        if lo_arr.shape != hi_arr.shape:
            lo_arr, hi_arr = np.broadcast_arrays(lo_arr, hi_arr)
        self.lo = lo_arr
        self.hi = hi_arr

    @classmethod
    def _make(cls, lo, hi) -> "Interval":
        obj = object.__new__(cls)
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape:
            lo, hi = np.broadcast_arrays(lo, hi)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def point(cls, x) -> "Interval":
        """Degenerate interval [x, x] for a binary64 value (or array)."""
        arr = np.asarray(x, dtype=np.float64)
        return cls(arr, arr)

    @classmethod
    def from_text(cls, text: str) -> "Interval":
        """Tightest interval containing the decimal number written in ``text``."""
        exact = Fraction(text.strip())
        nearest = float(exact)
        fx = Fraction(nearest)
        if fx == exact:
            return cls(nearest, nearest)
        if fx < exact:
            return cls(nearest, float(_up(nearest)))
        return cls(float(_down(nearest)), nearest)

    @classmethod
    def from_bounds(cls, lo_text: str, hi_text: str) -> "Interval":
        """Interval covering the decimal range [lo_text, hi_text]."""
        return cls(cls.from_text(lo_text).lo, cls.from_text(hi_text).hi)

    # -- shape ------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.lo.shape

    @property
    def size(self) -> int:
        return int(self.lo.size)

    def __getitem__(self, index) -> "Interval":
        return Interval._make(self.lo[index], self.hi[index])

    def reshape(self, *shape) -> "Interval":
        return Interval._make(self.lo.reshape(*shape), self.hi.reshape(*shape))

    def ravel(self) -> "Interval":
        return Interval._make(self.lo.ravel(), self.hi.ravel())

    # -- queries ----------------------------------------------------------

    @property
    def mid(self) -> np.ndarray:
        m = 0.5 * self.lo + 0.5 * self.hi
        return np.clip(m, self.lo, self.hi)

    @property
    def width(self) -> np.ndarray:
        return _add_up(self.hi, -self.lo)

    @property
    def rad(self) -> np.ndarray:
        m = self.mid
        return np.maximum(_add_up(self.hi, -m), _add_up(m, -self.lo))

    @property
    def mag(self) -> np.ndarray:
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    @property
    def mig(self) -> np.ndarray:
        straddles = (self.lo <= 0) & (self.hi >= 0)
        return np.where(straddles, 0.0, np.minimum(np.abs(self.lo), np.abs(self.hi)))

    def is_point(self) -> bool:
        return bool(np.all(self.lo == self.hi))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.lo)) and np.all(np.isfinite(self.hi)))

    def contains(self, x):
        """Whether the number (or every point of the interval) ``x`` lies inside."""
        if isinstance(x, Interval):
            return x.subset(self)
        value = np.asarray(x, dtype=np.float64)
        return (self.lo <= value) & (value <= self.hi)

    def subset(self, other: "Interval"):
        return (other.lo <= self.lo) & (self.hi <= other.hi)

    def interior(self, other: "Interval"):
        """Strict inclusion of self in the interior of other."""
        return (other.lo < self.lo) & (self.hi < other.hi)

    def overlaps(self, other: "Interval"):
        return (self.lo <= other.hi) & (other.lo <= self.hi)

    def hull(self, other: "IntervalLike") -> "Interval":
        y = _coerce(other)
        return Interval._make(np.minimum(self.lo, y.lo), np.maximum(self.hi, y.hi))

    def intersect(self, other: "IntervalLike") -> "Interval":
        y = _coerce(other)
        lo = np.maximum(self.lo, y.lo)
        hi = np.minimum(self.hi, y.hi)
        if np.any(lo > hi):
            raise EmptyIntersection(f"{self!r} and {y!r} are disjoint")
        return Interval._make(lo, hi)

    def to_pair(self) -> Tuple[float, float]:
        return float(self.lo), float(self.hi)

    def __repr__(self) -> str:
        if self.lo.ndim == 0:
            return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"
        return f"Interval(lo={self.lo!r}, hi={self.hi!r})"

    def __bool__(self):
        raise TypeError("truth value of an Interval is ambiguous; use contains/subset")

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval._make(-self.hi, -self.lo)

    def __pos__(self) -> "Interval":
        return self

    def __abs__(self) -> "Interval":
        lo = np.where(self.lo >= 0, self.lo, np.where(self.hi <= 0, -self.hi, 0.0))
        return Interval._make(lo, self.mag)

    def __add__(self, other: "IntervalLike") -> "Interval":
        y = _coerce(other)
        with np.errstate(all="ignore"):
            return Interval._make(_add_down(self.lo, y.lo), _add_up(self.hi, y.hi))

    __radd__ = __add__

    def __sub__(self, other: "IntervalLike") -> "Interval":
        y = _coerce(other)
        with np.errstate(all="ignore"):
            return Interval._make(_add_down(self.lo, -y.hi), _add_up(self.hi, -y.lo))

    def __rsub__(self, other: "IntervalLike") -> "Interval":
        return _coerce(other) - self

    def __mul__(self, other: "IntervalLike") -> "Interval":
        y = _coerce(other)
        with np.errstate(all="ignore"):
            l1, h1 = _mul_bounds(self.lo, y.lo)
            l2, h2 = _mul_bounds(self.lo, y.hi)
            l3, h3 = _mul_bounds(self.hi, y.lo)
            l4, h4 = _mul_bounds(self.hi, y.hi)
        lo = np.minimum(np.minimum(l1, l2), np.minimum(l3, l4))
        hi = np.maximum(np.maximum(h1, h2), np.maximum(h3, h4))
        return Interval._make(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other: "IntervalLike") -> "Interval":
        y = _coerce(other)
        if np.any((y.lo <= 0) & (y.hi >= 0)):
            raise DomainError("division by an interval containing 0")
        with np.errstate(all="ignore"):
            l1, h1 = _div_bounds(self.lo, y.lo)
            l2, h2 = _div_bounds(self.lo, y.hi)
            l3, h3 = _div_bounds(self.hi, y.lo)
            l4, h4 = _div_bounds(self.hi, y.hi)
        lo = np.minimum(np.minimum(l1, l2), np.minimum(l3, l4))
        hi = np.maximum(np.maximum(h1, h2), np.maximum(h3, h4))
        return Interval._make(lo, hi)

    def __rtruediv__(self, other: "IntervalLike") -> "Interval":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "Interval":
        return powi(self, n)

    def sqrt(self) -> "Interval":
        return sqrt(self)

    def exp(self) -> "Interval":
        return exp(self)

    def log(self) -> "Interval":
        return log(self)

    def square(self) -> "Interval":
        return powi(self, 2)


IntervalLike = Union[Interval, int, float, np.ndarray]


def _coerce(x: IntervalLike) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not interval operands")
    if isinstance(x, (int, np.integer)):
        if abs(int(x)) <= 2**53:
            return Interval.point(float(x))
        return Interval.from_text(str(int(x)))
    if isinstance(x, (float, np.floating, np.ndarray)):
        return Interval.point(x)
    raise TypeError(f"cannot use {type(x).__name__} as an interval operand")


def as_interval(x: IntervalLike) -> Interval:
    """Coerce a number, array or interval to an Interval."""
    return _coerce(x)


ONE = Interval.point(1.0)
PI = Interval(_down(math.pi), _up(math.pi))
LN2 = Interval(_down(0.6931471805599453), _up(0.6931471805599453))
_LN2_FLOAT = 0.6931471805599453
_SQRT_HALF = 0.7071067811865476


def _factorial(n: int) -> Interval:
    return Interval.from_text(str(math.factorial(n)))


def _pow_nonneg_point(a: np.ndarray, n: int) -> Interval:
    """[a**n] for non-negative float arrays by binary powering."""
    base = Interval.point(a)
    result = Interval.point(np.ones_like(a))
    while n > 0:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def powi(x: IntervalLike, n: int) -> Interval:
    """Integer power, tight for even powers of intervals straddling 0."""
    x = _coerce(x)
    if n < 0:
        return ONE / powi(x, -n)
    if n == 0:
        return Interval.point(np.ones_like(x.lo))
    if n == 1:
        return x
    if n % 2 == 0:
        lo = _pow_nonneg_point(x.mig, n).lo
        hi = _pow_nonneg_point(x.mag, n).hi
        return Interval._make(lo, hi)
    # odd: monotone increasing
    lo_abs = _pow_nonneg_point(np.abs(x.lo), n)
    hi_abs = _pow_nonneg_point(np.abs(x.hi), n)
    lo = np.where(x.lo >= 0, lo_abs.lo, -lo_abs.hi)
    hi = np.where(x.hi >= 0, hi_abs.hi, -hi_abs.lo)
    return Interval._make(lo, hi)


def sqrt(x: IntervalLike) -> Interval:
    x = _coerce(x)
    if np.any(x.lo < 0):
        raise DomainError(f"sqrt of an interval with negative part: {x!r}")
    with np.errstate(all="ignore"):
        lo, _ = _sqrt_bounds(x.lo)
        _, hi = _sqrt_bounds(x.hi)
    return Interval._make(lo, hi)


_EXP_REMAINDER_DEN = _factorial(_EXP_TERMS + 1)


def _exp_point(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Enclosure of exp(a) for float arrays a."""
    a = np.asarray(a, dtype=np.float64)
    if np.any(a > _EXP_MAX_ARG):
        raise DomainError("exp overflows binary64")
    tiny = a < _EXP_MIN_ARG
    a_safe = np.where(tiny, 0.0, a)
    # a = m*ln2 + r with |r| <= ln2/2 (plus rounding of r's enclosure)
    m = np.rint(a_safe / _LN2_FLOAT)
    r = Interval.point(a_safe) - Interval.point(m) * LN2
    acc = ONE
    for i in range(_EXP_TERMS, 0, -1):
        acc = 1.0 + r * acc / float(i)
    # Lagrange remainder of the degree-N Taylor sum:
    #   |R_N(r)| <= exp(|r|) |r|**(N+1) / (N+1)!  <=  2 |r|**(N+1) / (N+1)!  for |r| <= 1/2
    rem = (2.0 * _pow_nonneg_point(r.mag, _EXP_TERMS + 1) / _EXP_REMAINDER_DEN).hi
    with np.errstate(all="ignore"):
        lo = np.ldexp(_add_down(acc.lo, -rem), m.astype(np.int64))
        hi = np.ldexp(_add_up(acc.hi, rem), m.astype(np.int64))
    lo = np.where(tiny, 0.0, np.maximum(lo, 0.0))
    hi = np.where(tiny, _EXP_UNDERFLOW_BOUND, hi)
    return lo, hi


def exp(x: IntervalLike) -> Interval:
    """Monotone enclosure of exp via argument reduction and a Taylor sum."""
    x = _coerce(x)
    if x.lo is x.hi or np.array_equal(x.lo, x.hi):
        lo, hi = _exp_point(x.lo)
        return Interval._make(lo, hi)
    lo, _ = _exp_point(x.lo)
    _, hi = _exp_point(x.hi)
    return Interval._make(lo, hi)


_ODD_RECIPROCALS = [ONE / float(2 * i + 1) for i in range(_LOG_TERMS + 1)]


def _log_point(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Enclosure of ln(a) for positive float arrays a."""
    mant, e = np.frexp(np.asarray(a, dtype=np.float64))
    low = mant < _SQRT_HALF
    mant = np.where(low, mant * 2.0, mant)
    e = np.where(low, e - 1, e).astype(np.float64)
    x = Interval.point(mant)
    # ln(x) = 2 atanh(z), z = (x-1)/(x+1), |z| <= 0.1716
    z = (x - 1.0) / (x + 1.0)
    z2 = z * z
    acc = _ODD_RECIPROCALS[_LOG_TERMS]
    for i in range(_LOG_TERMS - 1, -1, -1):
        acc = _ODD_RECIPROCALS[i] + z2 * acc
    series = 2.0 * z * acc
    # Remainder of the atanh series after the z**(2N+1) term:
    #   |R| <= 2 |z|**(2N+3) / ((2N+3) (1 - z**2))
    zm = Interval.point(z.mag)
    n_rem = 2 * _LOG_TERMS + 3
    rem = (2.0 * powi(zm, n_rem) / (float(n_rem) * (1.0 - zm * zm))).hi
    total = Interval.point(e) * LN2 + series
    with np.errstate(all="ignore"):
        return _add_down(total.lo, -rem), _add_up(total.hi, rem)


def log(x: IntervalLike) -> Interval:
    """Natural logarithm; requires x.lo > 0."""
    x = _coerce(x)
    if np.any(x.lo <= 0):
        raise DomainError(f"ln of an interval touching or below 0: {x!r}")
    if x.lo is x.hi or np.array_equal(x.lo, x.hi):
        lo, hi = _log_point(x.lo)
        return Interval._make(lo, hi)
    lo, _ = _log_point(x.lo)
    _, hi = _log_point(x.hi)
    return Interval._make(lo, hi)


def pow_real(base: IntervalLike, exponent: IntervalLike) -> Interval:
    """Enclosure of {b**e : b in base, e in exponent} as exp(e ln b)."""
    b = _coerce(base)
    e = _coerce(exponent)
    if np.any(b.lo <= 0):
        raise DomainError(f"pow_real needs a positive base, got {b!r}")
    return exp(e * log(b))


def pow_nonneg(base: IntervalLike, exponent: IntervalLike) -> Interval:
    """
    Enclosure of b**e for b >= 0 and e >= 0, with 0**0 read as 1.

    Uses monotonicity: increasing in b; in e increasing for b >= 1 and
    decreasing for b <= 1.
    """
    b = _coerce(base)
    e = _coerce(exponent)
    if np.any(b.lo < 0) or np.any(e.lo < 0):
        raise DomainError("pow_nonneg needs a non-negative base and exponent")
    e_for_lo = np.where(b.lo <= 1.0, e.hi, e.lo)
    e_for_hi = np.where(b.hi <= 1.0, e.lo, e.hi)
    lo_pos = b.lo > 0
    hi_pos = b.hi > 0
    lo_val = pow_real(Interval.point(np.where(lo_pos, b.lo, 1.0)), Interval.point(e_for_lo)).lo
    hi_val = pow_real(Interval.point(np.where(hi_pos, b.hi, 1.0)), Interval.point(e_for_hi)).hi
    lo_val = np.where(lo_pos, lo_val, np.where(e_for_lo > 0, 0.0, 1.0))
    hi_val = np.where(hi_pos, hi_val, np.where(e_for_hi > 0, 0.0, 1.0))
    return Interval._make(np.maximum(lo_val, 0.0), hi_val)


_COS_DEN = [Interval.point(float((2 * i - 1) * (2 * i))) for i in range(1, _TRIG_TERMS + 1)]
_SIN_DEN = [Interval.point(float((2 * i) * (2 * i + 1))) for i in range(1, _TRIG_TERMS + 1)]
_COS_REM_DEN = _factorial(2 * _TRIG_TERMS + 2)
_SIN_REM_DEN = _factorial(2 * _TRIG_TERMS + 3)


def _cos_small(y: Interval) -> Interval:
    # cos y = 1 - y^2/(1*2) (1 - y^2/(3*4) (1 - ...)),  |y| <= pi/4
    y2 = y * y
    acc = ONE
    for i in range(_TRIG_TERMS, 0, -1):
        acc = 1.0 - y2 * acc / _COS_DEN[i - 1]
    rem = (_pow_nonneg_point(y.mag, 2 * _TRIG_TERMS + 2) / _COS_REM_DEN).hi
    return acc + Interval._make(-rem, rem)


def _sin_small(y: Interval) -> Interval:
    y2 = y * y
    acc = ONE
    for i in range(_TRIG_TERMS, 0, -1):
        acc = 1.0 - y2 * acc / _SIN_DEN[i - 1]
    rem = (_pow_nonneg_point(y.mag, 2 * _TRIG_TERMS + 3) / _SIN_REM_DEN).hi
    return y * acc + Interval._make(-rem, rem)


def cospi(p, q) -> Interval:
    """
    Enclosure of cos(pi * p / q) for integers p and q > 0 (scalars or arrays).

    The angle is reduced exactly in integer arithmetic to [0, pi/4] before a
    Taylor sum with Lagrange remainder is applied.
    """
    p = np.asarray(p, dtype=np.int64)
    q = np.asarray(q, dtype=np.int64)
    if np.any(q <= 0):
        raise DomainError("cospi needs a positive denominator")
    p, q = np.broadcast_arrays(p, q)
    # work in units of pi/(4q): angle index a in [0, 8q)
    a = np.mod(4 * p, 8 * q)
    a = np.where(a > 4 * q, 8 * q - a, a)  # cos(2pi - x) = cos x
    sign = np.where(a > 2 * q, -1.0, 1.0)
    a = np.where(a > 2 * q, 4 * q - a, a)  # cos(pi - x) = -cos x
    use_sin = a > q  # cos x = sin(pi/2 - x)
    cos_idx = np.where(use_sin, 0, a)
    sin_idx = np.where(use_sin, 2 * q - a, 0)
    den = (4.0 * q).astype(np.float64)
    y_cos = PI * cos_idx.astype(np.float64) / den
    y_sin = PI * sin_idx.astype(np.float64) / den
    c = _cos_small(y_cos)
    s = _sin_small(y_sin)
    lo = np.where(use_sin, s.lo, c.lo)
    hi = np.where(use_sin, s.hi, c.hi)
    lo, hi = np.where(sign > 0, lo, -hi), np.where(sign > 0, hi, -lo)
    return Interval._make(np.maximum(lo, -1.0), np.minimum(hi, 1.0))


_ARITH: Dict[str, Callable[[Interval, Interval], Interval]] = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def arith(x: IntervalLike, y: IntervalLike, kind: str) -> Interval:
    """Binary operation by name: add, sub, mul or div."""
    try:
        op = _ARITH[kind]
    except KeyError:
        raise ValueError(f"Unknown arithmetic kind '{kind}'. Valid: {', '.join(_ARITH)}")
    return op(_coerce(x), _coerce(y))


def func(x: IntervalLike, kind: str, n: int = 0) -> Interval:
    """Unary function by name: neg, abs, sqrt, exp, ln or powi (with ``n``)."""
    x = _coerce(x)
    if kind == "neg":
        return -x
    if kind == "abs":
        return abs(x)
    if kind == "sqrt":
        return sqrt(x)
    if kind == "exp":
        return exp(x)
    if kind == "ln":
        return log(x)
    if kind == "powi":
        return powi(x, n)
    raise ValueError(f"Unknown function kind '{kind}'")


def hull(*items: IntervalLike) -> Interval:
    """Smallest interval containing every argument."""
    if not items:
        raise ValueError("hull of nothing")
    result = _coerce(items[0])
    for item in items[1:]:
        result = result.hull(item)
    return result
