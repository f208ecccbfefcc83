"""
Supersolution certificate for the harmonic coefficient rows.

For a row (epsilon, a_0..a_3) and c in one of its subintervals,

    w(r, t) = sum_n a_n r^alpha_n h_n(t),    alpha_n (alpha_n + 1) = n (n + 1)(1 + c^2)
    v(r, t) = r kappa f(t) + epsilon r^(-1/2) g(t)

with h_n the Legendre polynomials and kappa f the normalised homogeneous
solution. Certified here:

  condition 1: w(1, t) > kappa f(t) + epsilon g(t) wherever w(1, t) > 0
  condition 3: |grad v| < 1 and |grad w| < 1 at the cross point where
               v = w = 0, and |grad w| < 1 on the zero set of w inside the
               rectangle x in [-1, -r0], y in [0, y0] of the (x, y) = (r t,
               r sqrt(1 - t^2)) half-plane

Zeros of v are located through V = r^(3/2) kappa f + epsilon g, which has
the sign of v for r > 0 and stays bounded at the origin.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .certificate import GridCertificate, SubintervalResult
from .cone import ConeParams, cone_grad_sq, one_minus_t_sq
from .config import CoefficientTable, SupersolutionRow
from .errors import CertificationFailure, CertifyError, DomainError, EmptyIntersection, NumericalError
from .grid import (
    EXCLUDED,
    FAIL,
    PASS,
    UNDECIDED,
    VACUOUS,
    SweepResult,
    grid_boxes,
    map_tasks,
    sweep_boxes,
)
from .interval import Interval, IntervalLike, as_interval, pow_nonneg, pow_real, powi, sqrt
from .legendre import (
    eval_f,
    eval_f_banded,
    eval_g,
    eval_g_banded,
    float_eval,
    float_eval_g,
    truncation_index,
)
from .roots import (
    RootEnclosure,
    RootStatus,
    T_C_SEED,
    interval_newton,
    newton_float,
    normalization,
)

logger = logging.getLogger(__name__)

T_FLOOR = -0.95
FLOOR_CELLS = 50
DEFAULT_GRID = (2000, 200)
PAPER_SCALE_GRID = (10000, 1000)
DEFAULT_DEPTH = 6
BLOCK = 4096

CROSS_SEED_RADIUS = 1e-3
CROSS_FLOAT_ITERS = 10
CROSS_INTERVAL_ITERS = 10
DEFAULT_CROSS_PIECES = 8
CROSS_SPLIT_DEPTH = 6
CROSS_BOX_DEPTH = 4
RECTANGLE_GRID = (30, 30)
SCAN_POINTS = 2000

CONDITION2_NOTE = "condition 2 (superharmonicity of min(v, w)) is analytic and not machine-checked"


# -- harmonic sums -----------------------------------------------------------


def harmonic_exponents(params: ConeParams, n_terms: int = 4) -> Tuple[Interval, ...]:
    """alpha_n = (-1 + sqrt(1 + 4 n (n+1)(1 + c^2))) / 2 for n < n_terms; alpha_n >= n."""
    one_plus_c_sq = params.one_plus_c_sq
    alphas = [Interval.point(np.zeros(one_plus_c_sq.shape))]
    for n in range(1, n_terms):
        alpha = (sqrt(1.0 + float(4 * n * (n + 1)) * one_plus_c_sq) - 1.0) / 2.0
        alphas.append(Interval(np.maximum(alpha.lo, float(n)), np.maximum(alpha.hi, float(n))))
    return tuple(alphas)


@dataclass(frozen=True)
class HarmonicSum:
    """Coefficients, exponents and epsilon of w for one parameter box."""

    params: ConeParams
    coefficients: Tuple[Interval, ...]
    alphas: Tuple[Interval, ...]
    epsilon: Interval
    # without the r^alpha_n factors w is a function of t alone
    radial: bool = True

    @classmethod
    def build(
        cls,
        params: ConeParams,
        coefficients: Sequence[IntervalLike],
        epsilon: IntervalLike = 0.0,
        radial: bool = True,
    ) -> "HarmonicSum":
        coefficients = tuple(as_interval(a) for a in coefficients)
        return cls(
            params=params,
            coefficients=coefficients,
            alphas=harmonic_exponents(params, len(coefficients)),
            epsilon=as_interval(epsilon),
            radial=radial,
        )

    @classmethod
    def from_row(cls, params: ConeParams, row: SupersolutionRow) -> "HarmonicSum":
        return cls.build(params, row.coefficients, row.epsilon_interval)

    def with_coefficients(
        self, coefficients: Sequence[IntervalLike], radial: Optional[bool] = None
    ) -> "HarmonicSum":
        return replace(
            self,
            coefficients=tuple(as_interval(a) for a in coefficients),
            radial=self.radial if radial is None else radial,
        )


def legendre_h(t: Interval, n: int) -> Interval:
    if n == 0:
        return Interval.point(np.ones(t.shape))
    if n == 1:
        return t
    if n == 2:
        return 1.5 * powi(t, 2) - 0.5
    if n == 3:
        return t * (2.5 * powi(t, 2) - 1.5)
    raise ValueError(f"Legendre polynomials are provided up to degree 3, got {n}")


def legendre_dh(t: Interval, n: int) -> Interval:
    if n == 0:
        return Interval.point(np.zeros(t.shape))
    if n == 1:
        return Interval.point(np.ones(t.shape))
    if n == 2:
        return 3.0 * t
    if n == 3:
        return 7.5 * powi(t, 2) - 1.5
    raise ValueError(f"Legendre polynomials are provided up to degree 3, got {n}")


def _check_radius(r: Interval) -> None:
    if np.any(r.lo < 0):
        raise DomainError(f"radius must be non-negative, got {r!r}")


def w(r: IntervalLike, t: IntervalLike, hs: HarmonicSum) -> Interval:
    """
    Enclosure of sum_n a_n r^alpha_n h_n(t).

    Raises:
        DomainError: If r has a negative part
    """
    r = as_interval(r)
    t = as_interval(t)
    _check_radius(r)
    total = hs.coefficients[0] * legendre_h(t, 0)
    for n in range(1, len(hs.coefficients)):
        term = hs.coefficients[n] * legendre_h(t, n)
        if hs.radial:
            term = term * pow_nonneg(r, hs.alphas[n])
        total = total + term
    return total


def w_boundary(t: IntervalLike, hs: HarmonicSum) -> Interval:
    """w(1, t) = sum_n a_n h_n(t)."""
    t = as_interval(t)
    total = hs.coefficients[0] * legendre_h(t, 0)
    for n in range(1, len(hs.coefficients)):
        total = total + hs.coefficients[n] * legendre_h(t, n)
    return total


def _w_partials(r: Interval, t: Interval, hs: HarmonicSum) -> Tuple[Interval, Interval, Interval]:
    """(w_r, w_t, w_t / r) without dividing by r in the radial case."""
    w_r = Interval.point(0.0)
    w_t = Interval.point(0.0)
    w_t_over_r = Interval.point(0.0)
    for n in range(1, len(hs.coefficients)):
        a = hs.coefficients[n]
        h = legendre_h(t, n)
        dh = legendre_dh(t, n)
        if hs.radial:
            alpha = hs.alphas[n]
            lowered = alpha - 1.0
            lowered = Interval(np.maximum(lowered.lo, 0.0), np.maximum(lowered.hi, 0.0))
            power = pow_nonneg(r, alpha)
            power_lowered = pow_nonneg(r, lowered)
            w_r = w_r + a * alpha * power_lowered * h
            w_t = w_t + a * power * dh
            w_t_over_r = w_t_over_r + a * power_lowered * dh
        else:
            w_t = w_t + a * dh
            w_t_over_r = w_t_over_r + a * dh / r
    return w_r, w_t, w_t_over_r


def grad_sq_w(r: IntervalLike, t: IntervalLike, hs: HarmonicSum) -> Interval:
    """Squared cone gradient of w; the non-radial form needs r bounded away from 0."""
    r = as_interval(r)
    t = as_interval(t)
    _check_radius(r)
    w_r, _, w_t_over_r = _w_partials(r, t, hs)
    return cone_grad_sq(w_r, w_t_over_r, t, hs.params.one_plus_c_sq)


def _k(t: Interval, t_floor: float = T_FLOOR) -> int:
    return truncation_index(max(float(np.min(t.lo)), t_floor))


def _series(t: Interval, beta: Interval, j: int, k: Optional[int], t_floor: float = T_FLOOR):
    """f^(j) and g^(j) with one truncation index, or per t-band when k is None."""
    if k is None:
        return eval_f_banded(t, beta, j, t_floor), eval_g_banded(t, beta, j, t_floor)
    return eval_f(t, beta, j, k).value, eval_g(t, beta, j, k).value


def kappa_for(beta: IntervalLike) -> Interval:
    """Normalisation constant per beta cell, solving once per distinct cell."""
    beta = as_interval(beta)
    if beta.lo.ndim == 0:
        return normalization(beta)
    pairs = np.stack([beta.lo.ravel(), beta.hi.ravel()], axis=1)
    unique, inverse = np.unique(pairs, axis=0, return_inverse=True)
    kappa = normalization(Interval(unique[:, 0], unique[:, 1]))
    return kappa[inverse.reshape(-1)].reshape(beta.shape)


def v_scaled(
    r: IntervalLike,
    t: IntervalLike,
    hs: HarmonicSum,
    kappa: Interval,
    k: Optional[int] = None,
    t_floor: float = T_FLOOR,
) -> Interval:
    """V = r^(3/2) kappa f + epsilon g, so that v = r^(-1/2) V."""
    r = as_interval(r)
    t = as_interval(t)
    _check_radius(r)
    f, g = _series(t, hs.params.beta, 0, k, t_floor)
    return r * sqrt(r) * kappa * f + hs.epsilon * g


def v(r: IntervalLike, t: IntervalLike, hs: HarmonicSum, kappa: Interval, k: Optional[int] = None) -> Interval:
    """r kappa f + epsilon r^(-1/2) g; r must be positive."""
    r = as_interval(r)
    return v_scaled(r, t, hs, kappa, k) / sqrt(r)


def grad_sq_v(
    r: IntervalLike, t: IntervalLike, hs: HarmonicSum, kappa: Interval, k: Optional[int] = None
) -> Interval:
    """Squared cone gradient of v; r must be positive."""
    r = as_interval(r)
    t = as_interval(t)
    if np.any(r.lo <= 0):
        raise DomainError(f"grad_sq_v needs a positive radius, got {r!r}")
    f, g = _series(t, hs.params.beta, 0, k)
    df, dg = _series(t, hs.params.beta, 1, k)
    r_m32 = 1.0 / (r * sqrt(r))
    v_r = kappa * f - 0.5 * hs.epsilon * r_m32 * g
    v_t_over_r = kappa * df + hs.epsilon * r_m32 * dg
    return cone_grad_sq(v_r, v_t_over_r, t, hs.params.one_plus_c_sq)


def grad_sq(
    field_name: str,
    r: IntervalLike,
    t: IntervalLike,
    hs: HarmonicSum,
    kappa: Optional[Interval] = None,
    k: Optional[int] = None,
) -> Interval:
    """Squared cone gradient of ``w`` or ``v``."""
    if field_name == "w":
        return grad_sq_w(r, t, hs)
    if field_name == "v":
        if kappa is None:
            kappa = kappa_for(hs.params.beta)
        return grad_sq_v(r, t, hs, kappa, k)
    raise ValueError(f"Unknown field '{field_name}'. Valid: w, v")


# -- floating point counterparts (seeds and profiles) -----------------------


def _float_alphas(one_plus_c_sq, n_terms: int) -> List:
    return [(-1.0 + np.sqrt(1.0 + 4.0 * n * (n + 1) * one_plus_c_sq)) / 2.0 for n in range(n_terms)]


def _float_h(t, n: int):
    return [np.ones_like(t), t, 1.5 * t * t - 0.5, 2.5 * t**3 - 1.5 * t][n]


def _float_dh(t, n: int):
    return [np.zeros_like(t), np.ones_like(t), 3.0 * t, 7.5 * t * t - 1.5][n]


def float_w_terms(r, t, alphas: Sequence, a: Sequence[float]):
    """(w, w_r, w_t) in floating point."""
    r = np.asarray(r, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    value = a[0] * np.ones(np.broadcast(r, t).shape)
    w_r = np.zeros_like(value)
    w_t = np.zeros_like(value)
    for n in range(1, len(a)):
        power = r ** alphas[n]
        value = value + a[n] * power * _float_h(t, n)
        w_r = w_r + a[n] * alphas[n] * r ** (alphas[n] - 1.0) * _float_h(t, n)
        w_t = w_t + a[n] * power * _float_dh(t, n)
    return value, w_r, w_t


def float_kappa(beta: float) -> Tuple[float, float]:
    """Non-rigorous (kappa, t_c) for a point beta."""
    t_c = float(newton_float(lambda t: float_eval(t, beta, 0), lambda t: float_eval(t, beta, 1), T_C_SEED))
    slope = abs(float(float_eval(t_c, beta, 1)))
    return 1.0 / (np.sqrt(1.0 - t_c * t_c) * slope), t_c


def float_w(r, t, c: float, a: Sequence[float]) -> np.ndarray:
    alphas = _float_alphas(1.0 + c * c, len(a))
    return float_w_terms(r, t, alphas, [float(x) for x in a])[0]


def float_v(r, t, c: float, epsilon: float, k: Optional[int] = None) -> np.ndarray:
    """r kappa f + epsilon r^(-1/2) g at points, for profiles."""
    r = np.asarray(r, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    beta = 2.0 / (1.0 + c * c)
    kappa, _ = float_kappa(beta)
    k = truncation_index(max(float(np.min(t)), T_FLOOR)) if k is None else k
    with np.errstate(divide="ignore"):
        return r * kappa * float_eval(t, beta, 0, k) + epsilon * float_eval_g(t, beta, 0, k) / np.sqrt(r)


def _float_pair(x: np.ndarray, beta: float, kappa: float, epsilon: float, alphas, a, k: int):
    r, t = float(x[0]), float(x[1])
    w_val, w_r, w_t = float_w_terms(r, t, alphas, a)
    f = float(float_eval(t, beta, 0, k))
    df = float(float_eval(t, beta, 1, k))
    g = float(float_eval_g(t, beta, 0, k))
    dg = float(float_eval_g(t, beta, 1, k))
    value = np.array([float(w_val), r**1.5 * kappa * f + epsilon * g])
    jacobian = np.array(
        [
            [float(w_r), float(w_t)],
            [1.5 * np.sqrt(r) * kappa * f, r**1.5 * kappa * df + epsilon * dg],
        ]
    )
    return value, jacobian


def _float_cross(row: SupersolutionRow, c: float, t_floor: float = T_FLOOR) -> Optional[Tuple[float, float]]:
    """
    Float cross point (r, t) of w = 0 and v = 0 inside the unit ball, or None.

    The zero curve of v is r(t) = (epsilon g / (kappa |f|))^(2/3) for t < t_c;
    a sign change of w along it seeds a two-dimensional Newton iteration.

    Raises:
        NumericalError: If Newton leaves the ball or the Jacobian is singular
    """
    one_plus_c_sq = 1.0 + c * c
    beta = 2.0 / one_plus_c_sq
    a = [float(x) for x in row.a]
    epsilon = float(row.epsilon)
    alphas = _float_alphas(one_plus_c_sq, len(a))
    kappa, t_c = float_kappa(beta)
    k = truncation_index(t_floor)
    ts = np.linspace(t_floor, t_c, SCAN_POINTS)[:-1]
    f = float_eval(ts, beta, 0, k)
    g = float_eval_g(ts, beta, 0, k)
    with np.errstate(divide="ignore", over="ignore"):
        radius = (epsilon * g / (kappa * np.abs(f))) ** (2.0 / 3.0)
    inside = radius <= 1.0
    w_vals = float_w_terms(np.where(inside, radius, 1.0), ts, alphas, a)[0]
    change = inside[:-1] & inside[1:] & (np.sign(w_vals[:-1]) != np.sign(w_vals[1:]))
    candidates = np.flatnonzero(change)
    if candidates.size == 0:
        return None
    i = candidates[-1]
    x = np.array([radius[i], ts[i]])
    for _ in range(CROSS_FLOAT_ITERS):
        value, jacobian = _float_pair(x, beta, kappa, epsilon, alphas, a, k)
        try:
            x = x - np.linalg.solve(jacobian, value)
        except np.linalg.LinAlgError:
            raise NumericalError(f"singular cross point Jacobian at c = {c}")
        if not np.all(np.isfinite(x)) or not (0.0 < x[0] <= 1.0 and t_floor < x[1] < 1.0):
            raise NumericalError(f"cross point Newton left the unit ball at c = {c}: {x}")
    return float(x[0]), float(x[1])


def _float_sphere_root(beta: float, kappa: float, epsilon: float, t_c: float) -> float:
    k = truncation_index(T_FLOOR)
    return float(
        newton_float(
            lambda t: kappa * float_eval(t, beta, 0, k) + epsilon * float_eval_g(t, beta, 0, k),
            lambda t: kappa * float_eval(t, beta, 1, k) + epsilon * float_eval_g(t, beta, 1, k),
            t_c,
        )
    )


# -- cross point -------------------------------------------------------------


@dataclass(frozen=True)
class CrossPoint:
    """Verified simultaneous zero of w and v, or the boundary zero of v when they do not meet."""

    c: Interval
    root: RootEnclosure
    r: Interval
    on_sphere: bool = False

    @property
    def t(self) -> Interval:
        return self.root.interval

    @property
    def x0(self) -> Interval:
        return self.r * self.t

    @property
    def y0(self) -> Interval:
        return self.r * sqrt(one_minus_t_sq(self.t))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c": [repr(float(self.c.lo)), repr(float(self.c.hi))],
            "r": [repr(float(self.r.lo)), repr(float(self.r.hi))],
            "t": [repr(float(self.t.lo)), repr(float(self.t.hi))],
            "status": self.root.status.value,
            "on_sphere": self.on_sphere,
        }


def _pair_terms(r: Interval, t: Interval, hs: HarmonicSum, kappa: Interval, k: int):
    w_val = w(r, t, hs)
    w_r, w_t, _ = _w_partials(r, t, hs)
    beta = hs.params.beta
    f = eval_f(t, beta, 0, k).value
    df = eval_f(t, beta, 1, k).value
    g = eval_g(t, beta, 0, k).value
    dg = eval_g(t, beta, 1, k).value
    sr = sqrt(r)
    r32 = r * sr
    values = (w_val, r32 * kappa * f + hs.epsilon * g)
    jacobian = ((w_r, w_t), (1.5 * sr * kappa * f, r32 * kappa * df + hs.epsilon * dg))
    return values, jacobian


def krawczyk(
    hs: HarmonicSum,
    kappa: Interval,
    box_r: Interval,
    box_t: Interval,
    max_iters: int = CROSS_INTERVAL_ITERS,
) -> Tuple[Interval, Interval, bool, int]:
    """
    Krawczyk iteration for (w, V) = 0 on the box.

    K(X) = m - Y F(m) + (I - Y J(X))(X - m) with Y the inverse of mid J(X).
    K(X) inside the interior of X proves a unique zero for every parameter
    in the box; an empty K(X) & X proves there is none.

    Returns:
        (r enclosure, t enclosure, verified, iterations)

    Raises:
        CertificationFailure: If the box provably holds no zero or J is singular
    """
    verified = False
    iterations = 0
    for step in range(max_iters):
        k = _k(box_t)
        m_r, m_t = float(box_r.mid), float(box_t.mid)
        (f1, f2), _ = _pair_terms(Interval(m_r), Interval(m_t), hs, kappa, k)
        _, ((j11, j12), (j21, j22)) = _pair_terms(box_r, box_t, hs, kappa, k)
        mid = np.array([[float(j11.mid), float(j12.mid)], [float(j21.mid), float(j22.mid)]])
        try:
            y = np.linalg.inv(mid)
        except np.linalg.LinAlgError:
            raise CertificationFailure("singular Jacobian at the cross point")
        y11, y12, y21, y22 = (float(y[0, 0]), float(y[0, 1]), float(y[1, 0]), float(y[1, 1]))
        c11 = 1.0 - (y11 * j11 + y12 * j21)
        c12 = -(y11 * j12 + y12 * j22)
        c21 = -(y21 * j11 + y22 * j21)
        c22 = 1.0 - (y21 * j12 + y22 * j22)
        d_r = box_r - m_r
        d_t = box_t - m_t
        k_r = m_r - (y11 * f1 + y12 * f2) + c11 * d_r + c12 * d_t
        k_t = m_t - (y21 * f1 + y22 * f2) + c21 * d_r + c22 * d_t
        iterations = step + 1
        if bool(k_r.interior(box_r)) and bool(k_t.interior(box_t)):
            verified = True
        try:
            new_r = k_r.intersect(box_r)
            new_t = k_t.intersect(box_t)
        except EmptyIntersection:
            raise CertificationFailure("no cross point inside the seed box")
        unchanged = new_r.to_pair() == box_r.to_pair() and new_t.to_pair() == box_t.to_pair()
        box_r, box_t = new_r, new_t
        if verified and unchanged:
            break
    return box_r, box_t, verified, iterations


def _sphere_root(hs: HarmonicSum, kappa: Interval, c: Interval, t_floor: float) -> RootEnclosure:
    epsilon = float(hs.epsilon.mid)
    seeds = []
    for c_value in (float(c.lo), float(c.hi)):
        beta = 2.0 / (1.0 + c_value * c_value)
        kappa_f, t_c = float_kappa(beta)
        seeds.append(_float_sphere_root(beta, kappa_f, epsilon, t_c))
    centre = 0.5 * (seeds[0] + seeds[1])
    radius = CROSS_SEED_RADIUS + 0.5 * abs(seeds[0] - seeds[1])
    seed = Interval(max(centre - radius, t_floor), min(centre + radius, 0.99))
    k = truncation_index(float(seed.lo))
    beta = hs.params.beta

    def fun(t: Interval) -> Interval:
        return kappa * eval_f(t, beta, 0, k).value + hs.epsilon * eval_g(t, beta, 0, k).value

    def dfun(t: Interval) -> Interval:
        return kappa * eval_f(t, beta, 1, k).value + hs.epsilon * eval_g(t, beta, 1, k).value

    root = interval_newton(fun, dfun, seed)
    if not root.verified:
        raise CertificationFailure(f"boundary zero of v not verified for c={c!r} ({root.status.value})")
    return root


def find_cross_point(row: SupersolutionRow, c: IntervalLike, t_floor: float = T_FLOOR) -> CrossPoint:
    """
    Verified enclosure of the cross point for every c in ``c``.

    Float Newton on the pair seeds a box of radius 1e-3 (widened by the
    spread of the seeds over c) that Krawczyk's operator must map into its
    own interior. When the zero curves of v and w do not meet inside the
    unit ball the boundary zero t_eps of v(1, .) is returned instead, and w
    must be certified positive there.

    Raises:
        CertificationFailure: If no enclosure can be verified
    """
    c = as_interval(c)
    params = ConeParams.from_c(c)
    hs = HarmonicSum.from_row(params, row)
    kappa = normalization(params.beta)
    try:
        seeds = [_float_cross(row, x, t_floor) for x in (float(c.lo), float(c.hi))]
    except NumericalError as e:
        raise CertificationFailure(f"cross point seeding failed: {e}")

    if seeds[0] is None and seeds[1] is None:
        root = _sphere_root(hs, kappa, c, t_floor)
        if not bool(np.all(w_boundary(root.interval, hs).lo > 0)):
            raise CertificationFailure(f"w is not certified positive at the boundary zero of v for c={c!r}")
        return CrossPoint(c=c, root=root, r=Interval(1.0), on_sphere=True)
    if seeds[0] is None or seeds[1] is None:
        raise CertificationFailure(f"cross point reaches the unit sphere inside c={c!r}")

    (r_a, t_a), (r_b, t_b) = seeds
    rad_r = CROSS_SEED_RADIUS + 0.5 * abs(r_a - r_b)
    rad_t = CROSS_SEED_RADIUS + 0.5 * abs(t_a - t_b)
    box_r = Interval(max(0.5 * (r_a + r_b) - rad_r, 1e-6), 0.5 * (r_a + r_b) + rad_r)
    box_t = Interval(max(0.5 * (t_a + t_b) - rad_t, t_floor), min(0.5 * (t_a + t_b) + rad_t, 0.99))
    box_r, box_t, verified, iterations = krawczyk(hs, kappa, box_r, box_t)
    if not verified:
        raise CertificationFailure(f"Krawczyk test inconclusive for the cross point at c={c!r}")
    root = RootEnclosure(interval=box_t, status=RootStatus.VERIFIED_UNIQUE, iterations=iterations)
    logger.debug("cross point c=%r: r=%r t=%r", c, box_r, box_t)
    return CrossPoint(c=c, root=root, r=box_r, on_sphere=False)


# -- condition 3 ------------------------------------------------------------


def check_cross_gradient(
    cross: CrossPoint, row: SupersolutionRow, depth: int = CROSS_BOX_DEPTH
) -> SweepResult:
    """|grad v|^2 < 1 (and |grad w|^2 < 1 off the sphere) on the cross point enclosure."""
    params = ConeParams.from_c(cross.c)
    hs = HarmonicSum.from_row(params, row)
    kappa = normalization(params.beta)

    def evaluate(lo: np.ndarray, hi: np.ndarray):
        r = Interval(lo[:, 0], hi[:, 0])
        t = Interval(lo[:, 1], hi[:, 1])
        k = _k(t)
        big_v = v_scaled(r, t, hs, kappa, k)
        worst = grad_sq_v(r, t, hs, kappa, k).hi
        off = (big_v.lo > 0) | (big_v.hi < 0)
        if not cross.on_sphere:
            big_w = w(r, t, hs)
            off |= (big_w.lo > 0) | (big_w.hi < 0)
            worst = np.maximum(worst, grad_sq_w(r, t, hs).hi)
        status = np.where(off, VACUOUS, np.where(worst < 1.0, PASS, UNDECIDED))
        return status, 1.0 - worst

    lo = np.array([[float(cross.r.lo), float(cross.t.lo)]])
    hi = np.array([[float(cross.r.hi), float(cross.t.hi)]])
    return sweep_boxes(evaluate, lo, hi, depth)


def check_rectangle(
    cross: CrossPoint,
    row: SupersolutionRow,
    grid: Tuple[int, int] = RECTANGLE_GRID,
    depth: int = DEFAULT_DEPTH,
) -> SweepResult:
    """|grad w|^2 < 1 on every cell of x in [-1, -r0], y in [0, y0] where w may vanish."""
    params = ConeParams.from_c(cross.c)
    hs = HarmonicSum.from_row(params, row)
    x_hi = -float(cross.r.lo)
    y_hi = float(cross.y0.hi)
    if not (x_hi > -1.0 and y_hi > 0.0):
        return SweepResult()

    def evaluate(lo: np.ndarray, hi: np.ndarray):
        x = Interval(lo[:, 0], hi[:, 0])
        y = Interval(lo[:, 1], hi[:, 1])
        r = sqrt(powi(x, 2) + powi(y, 2))
        t = x / r
        t = Interval(np.clip(t.lo, -1.0, 1.0), np.clip(t.hi, -1.0, 1.0))
        big_w = w(r, t, hs)
        off = (big_w.lo > 0) | (big_w.hi < 0)
        worst = grad_sq_w(r, t, hs).hi
        status = np.where(off, VACUOUS, np.where(worst < 1.0, PASS, UNDECIDED))
        return status, 1.0 - worst

    lo, hi = grid_boxes([np.linspace(-1.0, x_hi, grid[0] + 1), np.linspace(0.0, y_hi, grid[1] + 1)])
    return sweep_boxes(evaluate, lo, hi, depth)


@dataclass
class PieceOutcome:
    sweep: SweepResult = field(default_factory=SweepResult)
    cross_points: List[Dict[str, Any]] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    pieces: int = 0

    def merge(self, other: "PieceOutcome") -> "PieceOutcome":
        return PieceOutcome(
            sweep=self.sweep.merge(other.sweep),
            cross_points=self.cross_points + other.cross_points,
            errors=self.errors + other.errors,
            pieces=self.pieces + other.pieces,
        )


def _condition3_piece(
    row: SupersolutionRow, c_lo: float, c_hi: float, depth: int, t_floor: float, level: int, split_depth: int
) -> PieceOutcome:
    outcome = PieceOutcome(pieces=1)
    try:
        cross = find_cross_point(row, Interval(c_lo, c_hi), t_floor)
        sweep = check_cross_gradient(cross, row, min(depth, CROSS_BOX_DEPTH))
        if not cross.on_sphere:
            sweep = sweep.merge(check_rectangle(cross, row, RECTANGLE_GRID, depth))
        outcome.sweep = sweep
        outcome.cross_points.append(cross.to_dict())
    except CertifyError as e:
        outcome.errors.append(f"c in [{c_lo!r}, {c_hi!r}]: {e}")

    if (outcome.errors or not outcome.sweep.passed) and level < split_depth:
        mid = 0.5 * c_lo + 0.5 * c_hi
        if c_lo < mid < c_hi:
            logger.debug("condition 3: splitting c=[%r, %r] at level %d", c_lo, c_hi, level)
            left = _condition3_piece(row, c_lo, mid, depth, t_floor, level + 1, split_depth)
            right = _condition3_piece(row, mid, c_hi, depth, t_floor, level + 1, split_depth)
            return left.merge(right)
    return outcome


# -- tasks -------------------------------------------------------------------


@dataclass(frozen=True)
class SupersolutionTask:
    kind: str
    row: SupersolutionRow
    c_lo: float
    c_hi: float
    n_t: int = DEFAULT_GRID[0]
    n_beta: int = DEFAULT_GRID[1]
    depth: int = DEFAULT_DEPTH
    t_floor: float = T_FLOOR
    pieces: int = DEFAULT_CROSS_PIECES


def t_edges(n_t: int, t_floor: float = T_FLOOR, n_floor: int = FLOOR_CELLS) -> np.ndarray:
    """Edges on [-1, 1] with t_floor as an edge: n_floor cells below it, n_t above."""
    below = np.linspace(-1.0, t_floor, n_floor + 1)
    above = np.linspace(t_floor, 1.0, n_t + 1)
    edges = np.concatenate([below[:-1], above])
    edges[0], edges[-1] = -1.0, 1.0
    return edges


def _beta_edges(c_lo: float, c_hi: float, n_beta: int) -> np.ndarray:
    beta = ConeParams.from_c(Interval(c_lo, c_hi)).beta
    lo, hi = float(beta.lo), min(float(beta.hi), 2.0)
    edges = np.linspace(lo, hi, n_beta + 1)
    edges[0], edges[-1] = lo, hi
    return edges


def _condition1_status(t: Interval, beta: Interval, row: SupersolutionRow, t_floor: float):
    hs = HarmonicSum.from_row(ConeParams.from_beta(beta), row)
    boundary = w_boundary(t, hs)
    status = np.full(t.shape, UNDECIDED)
    margin = -boundary.hi
    vacuous = boundary.hi <= 0
    status[vacuous] = VACUOUS
    below = (t.hi <= t_floor) & ~vacuous
    status[below] = EXCLUDED
    todo = np.flatnonzero(~vacuous & (t.lo >= t_floor))
    if todo.size:
        tt = t[todo]
        bb = beta[todo]
        kappa = kappa_for(bb)
        f, g = _series(tt, bb, 0, None, t_floor)
        wb = boundary[todo]
        diff = wb - kappa * f - hs.epsilon * g
        status[todo] = np.where(
            diff.lo > 0, PASS, np.where((diff.hi < 0) & (wb.lo > 0), FAIL, UNDECIDED)
        )
        margin[todo] = diff.lo
    return status, margin


def _condition1(task: SupersolutionTask) -> SubintervalResult:
    def evaluate(lo: np.ndarray, hi: np.ndarray):
        status = np.empty(lo.shape[0], dtype=int)
        margin = np.empty(lo.shape[0])
        for start in range(0, lo.shape[0], BLOCK):
            block = slice(start, start + BLOCK)
            t = Interval(lo[block, 0], hi[block, 0])
            beta = Interval(lo[block, 1], hi[block, 1])
            status[block], margin[block] = _condition1_status(t, beta, task.row, task.t_floor)
        return status, margin

    lo, hi = grid_boxes([t_edges(task.n_t, task.t_floor), _beta_edges(task.c_lo, task.c_hi, task.n_beta)])
    sweep = sweep_boxes(evaluate, lo, hi, task.depth)
    logger.info(
        "row %s condition 1 c=[%r, %r]: %d pass, %d vacuous, %d excluded, %d failed",
        task.row.id,
        task.c_lo,
        task.c_hi,
        sweep.counts["pass"],
        sweep.counts["vacuous"],
        sweep.counts["excluded"],
        len(sweep.failures),
    )
    return SubintervalResult(c=(task.c_lo, task.c_hi), sweep=sweep, notes={"t_floor": task.t_floor})


def _condition3(task: SupersolutionTask) -> SubintervalResult:
    edges = np.linspace(task.c_lo, task.c_hi, task.pieces + 1)
    edges[0], edges[-1] = task.c_lo, task.c_hi
    outcome = PieceOutcome()
    for a, b in zip(edges[:-1], edges[1:]):
        outcome = outcome.merge(
            _condition3_piece(task.row, float(a), float(b), task.depth, task.t_floor, 0, CROSS_SPLIT_DEPTH)
        )
    on_sphere = sum(1 for p in outcome.cross_points if p["on_sphere"])
    notes = {
        "pieces": outcome.pieces,
        "cross_points_on_sphere": on_sphere,
        "cross_points_interior": len(outcome.cross_points) - on_sphere,
        "cross_points": outcome.cross_points[:8],
    }
    logger.info(
        "row %s condition 3 c=[%r, %r]: %d pieces, %d failed cells, %d errors",
        task.row.id,
        task.c_lo,
        task.c_hi,
        outcome.pieces,
        len(outcome.sweep.failures),
        len(outcome.errors),
    )
    error = "; ".join(outcome.errors[:3]) if outcome.errors else None
    return SubintervalResult(c=(task.c_lo, task.c_hi), sweep=outcome.sweep, notes=notes, error=error)


def run_task(task: SupersolutionTask) -> SubintervalResult:
    """Worker entry point; errors become an unprocessed subinterval."""
    try:
        if task.kind == "condition1":
            return _condition1(task)
        if task.kind == "condition3":
            return _condition3(task)
        raise ValueError(f"Unknown task kind '{task.kind}'")
    except CertifyError as e:
        logger.warning(
            "row %s %s c=[%r, %r] not processed: %s", task.row.id, task.kind, task.c_lo, task.c_hi, e
        )
        return SubintervalResult(c=(task.c_lo, task.c_hi), sweep=SweepResult(), error=str(e))


def _check_subinterval(row: SupersolutionRow, c_sub: IntervalLike) -> Tuple[float, float]:
    c_sub = as_interval(c_sub)
    lo, hi = float(c_sub.lo), float(c_sub.hi)
    listed = row.subinterval_bounds()
    if not any(a <= lo and hi <= b for a, b in listed):
        raise DomainError(f"c-subinterval [{lo}, {hi}] is not listed for row {row.id}")
    return lo, hi


def verify_condition1(
    row: SupersolutionRow,
    c_sub: IntervalLike,
    n_t: int = DEFAULT_GRID[0],
    n_beta: int = DEFAULT_GRID[1],
    depth: int = DEFAULT_DEPTH,
    t_floor: float = T_FLOOR,
) -> GridCertificate:
    """
    Certify w(1, t) > kappa f + epsilon g on {w(1, .) > 0} over t in [-1, 1] and the beta range of c_sub.

    Cells with w(1, t) <= 0 are recorded as vacuous. Below t_floor only the
    cubic w(1, .) is evaluated: cells there are vacuous or excluded.
    """
    lo, hi = _check_subinterval(row, c_sub)
    task = SupersolutionTask("condition1", row, lo, hi, n_t, n_beta, depth, t_floor)
    certificate = GridCertificate(
        f"row{row.id}/condition1",
        {"row": row.id, "grid": [n_t, n_beta], "depth": depth, "t_floor": t_floor},
    )
    certificate.add(run_task(task))
    return certificate


def verify_condition3(
    row: SupersolutionRow,
    c_sub: IntervalLike,
    pieces: int = DEFAULT_CROSS_PIECES,
    depth: int = DEFAULT_DEPTH,
    t_floor: float = T_FLOOR,
) -> GridCertificate:
    """
    Certify the gradient bounds at the cross point and on the rectangle behind it.

    c_sub is split into ``pieces`` pieces, each halved again while its
    checks stay undecided.
    """
    lo, hi = _check_subinterval(row, c_sub)
    task = SupersolutionTask("condition3", row, lo, hi, depth=depth, t_floor=t_floor, pieces=pieces)
    certificate = GridCertificate(
        f"row{row.id}/condition3",
        {"row": row.id, "pieces": pieces, "depth": depth, "rectangle_grid": list(RECTANGLE_GRID)},
    )
    certificate.add(run_task(task))
    return certificate


def verify_supersolution(
    rows: Sequence[SupersolutionRow],
    n_t: int = DEFAULT_GRID[0],
    n_beta: int = DEFAULT_GRID[1],
    depth: int = DEFAULT_DEPTH,
    t_floor: float = T_FLOOR,
    pieces: int = DEFAULT_CROSS_PIECES,
    threads: int = 1,
) -> List[GridCertificate]:
    """
    Conditions 1 and 3 for every listed c-subinterval of every row.

    Returns:
        Two certificates per row, condition 1 first
    """
    tasks = []
    for row in rows:
        for lo, hi in row.subinterval_bounds():
            tasks.append(SupersolutionTask("condition1", row, lo, hi, n_t, n_beta, depth, t_floor, pieces))
            tasks.append(SupersolutionTask("condition3", row, lo, hi, n_t, n_beta, depth, t_floor, pieces))
    results = map_tasks(run_task, tasks, threads)

    certificates: Dict[Tuple[str, str], GridCertificate] = {}
    for row in rows:
        for kind in ("condition1", "condition3"):
            parameters: Dict[str, Any] = {
                "row": row.id,
                "c_range": [row.c_lo, row.c_hi],
                "epsilon": row.epsilon,
                "a": list(row.a),
                "depth": depth,
                "t_floor": t_floor,
            }
            if kind == "condition1":
                parameters["grid"] = [n_t, n_beta]
            else:
                parameters["pieces"] = pieces
                parameters["rectangle_grid"] = list(RECTANGLE_GRID)
            certificate = GridCertificate(f"row{row.id}/{kind}", parameters)
            if kind == "condition3":
                certificate.notes.append(CONDITION2_NOTE)
            certificates[(row.id, kind)] = certificate
    for task, result in zip(tasks, results):
        certificates[(task.row.id, task.kind)].add(result)
    return list(certificates.values())


# -- the q_s comparison families --------------------------------------------

QS_LINEAR_RANGE = ("0", "0.3")
QS_PIECEWISE_RANGE = ("0.3", "0.4")
QS_S = Fraction("0.22")
QS_LINEAR_FACTOR = Fraction("0.8")
QS_GRID = (64, 256)
QS_BOUNDARY_GRID = (512, 16)
QS_VARIANTS = ("harmonic", "as_written")

# (s_lo, s_hi, slope, intercept); s_hi None means unbounded
S1_PIECES = [
    (Fraction(0), Fraction(1), Fraction("0.65"), Fraction("0.85")),
    (Fraction(1), Fraction(2), Fraction(0), Fraction("1.5")),
    (Fraction(2), Fraction(3), Fraction("1.5"), Fraction("-1.5")),
    (Fraction(3), Fraction(4), Fraction(0), Fraction(3)),
    (Fraction(4), None, Fraction(1), Fraction(-1)),
]
S2_PIECES = [
    (Fraction(0), Fraction(1), Fraction(0), Fraction("0.95")),
    (Fraction(1), Fraction(2), Fraction("-0.15"), Fraction("1.1")),
    (Fraction(2), Fraction(3), Fraction(0), Fraction("0.8")),
    (Fraction(3), Fraction(4), Fraction("-0.1"), Fraction("1.1")),
    (Fraction(4), None, Fraction(0), Fraction("0.7")),
]


def _piecewise(pieces, s) -> Fraction:
    s = Fraction(s)
    if s < 0:
        raise DomainError(f"s must be non-negative, got {s}")
    for lo, hi, slope, intercept in pieces:
        if lo <= s and (hi is None or s <= hi):
            return slope * s + intercept
    raise DomainError(f"no piece covers s = {s}")


def s1(s) -> Fraction:
    return _piecewise(S1_PIECES, s)


def s2(s) -> Fraction:
    return _piecewise(S2_PIECES, s)


def piecewise_breaks() -> List[Dict[str, Any]]:
    """Values of both neighbouring pieces of s1 and s2 at every breakpoint."""
    out = []
    for name, pieces in (("s1", S1_PIECES), ("s2", S2_PIECES)):
        for (_, hi, slope_l, icpt_l), (lo, _, slope_r, icpt_r) in zip(pieces[:-1], pieces[1:]):
            left = slope_l * hi + icpt_l
            right = slope_r * lo + icpt_r
            out.append(
                {"function": name, "s": str(hi), "left": str(left), "right": str(right), "continuous": left == right}
            )
    return out


def s2_sup() -> Fraction:
    """Supremum of s2 over s >= 0; the pieces are linear so endpoints suffice."""
    values = []
    for lo, hi, slope, intercept in S2_PIECES:
        values.append(slope * lo + intercept)
        if hi is not None:
            values.append(slope * hi + intercept)
        elif slope > 0:
            raise ValueError("s2 is unbounded")
    return max(values)


def _interval(x: Fraction) -> Interval:
    return Interval.from_text(str(x))


@dataclass(frozen=True)
class QsTask:
    family: str
    check: str
    variant: str
    row: SupersolutionRow
    c_lo: float
    c_hi: float
    grid: Tuple[int, int] = QS_GRID
    boundary_grid: Tuple[int, int] = QS_BOUNDARY_GRID
    depth: int = DEFAULT_DEPTH
    t_floor: float = T_FLOOR


def qs_sums(task: QsTask, params: ConeParams) -> Tuple[HarmonicSum, HarmonicSum, HarmonicSum]:
    """
    (w of the row, positive part of q_s at the checked s, the part whose gradient bounds q_s).

    Linear family: q_s = s a_0 + 0.8 a_1 r^alpha_1 h_1, checked at s = 0.22.
    Piecewise family: q_s = s1(s) a_0 + s2(s) sum_{n>=1} a_n [r^alpha_n] h_n,
    checked at s = 0 with the gradient scaled by sup s2.
    """
    row_sum = HarmonicSum.from_row(params, task.row)
    a = task.row.coefficients
    radial = task.variant == "harmonic"
    if task.family == "linear":
        factor = _interval(QS_LINEAR_FACTOR)
        q = row_sum.with_coefficients((_interval(QS_S) * a[0], factor * a[1], 0.0, 0.0))
        gradient = row_sum.with_coefficients((0.0, factor * a[1], 0.0, 0.0))
    else:
        first, second = _interval(s1(0)), _interval(s2(0))
        q = row_sum.with_coefficients([first * a[0]] + [second * x for x in a[1:]], radial=radial)
        sup = _interval(s2_sup())
        gradient = row_sum.with_coefficients([0.0] + [sup * x for x in a[1:]], radial=radial)
    return row_sum, q, gradient


def _r_edges(n_r: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n_r + 1)


def _qs_gradient(task: QsTask, params: ConeParams) -> SweepResult:
    _, _, gradient = qs_sums(task, params)

    def evaluate(lo: np.ndarray, hi: np.ndarray):
        r = Interval(lo[:, 0], hi[:, 0])
        t = Interval(lo[:, 1], hi[:, 1])
        status = np.full(r.shape, UNDECIDED)
        margin = np.full(r.shape, -np.inf)
        ok = r.lo > 0 if not gradient.radial else np.ones(r.shape, dtype=bool)
        idx = np.flatnonzero(ok)
        if idx.size:
            g2 = grad_sq_w(r[idx], t[idx], gradient)
            status[idx] = np.where(g2.hi < 1.0, PASS, np.where(g2.lo >= 1.0, FAIL, UNDECIDED))
            margin[idx] = 1.0 - g2.hi
        return status, margin

    lo, hi = grid_boxes([_r_edges(task.grid[0]), np.linspace(-1.0, 1.0, task.grid[1] + 1)])
    return sweep_boxes(evaluate, lo, hi, task.depth)


def small_radius(epsilon: Interval, kappa: Interval) -> Interval:
    """
    Radius below which v > 0 for every t in (-1, 1].

    With a_n <= 0 and b_n >= |a_n| / 8 for the coefficients of f and g,
    r^(3/2) kappa <= epsilon / 8 gives V >= epsilon (f / 8 + g) > 0.
    """
    return pow_real(epsilon / (8.0 * kappa), Interval(2.0) / 3.0)


def _qs_inclusion(task: QsTask, params: ConeParams) -> SweepResult:
    row_sum, q, _ = qs_sums(task, params)
    kappa = normalization(params.beta)
    r_small = float(small_radius(row_sum.epsilon, kappa).lo)
    # linear family: supp q within supp p; piecewise family: q <= p
    ordered = task.family == "piecewise"

    def evaluate(lo: np.ndarray, hi: np.ndarray):
        r = Interval(lo[:, 0], hi[:, 0])
        t = Interval(lo[:, 1], hi[:, 1])
        q_val = w(r, t, q)
        status = np.full(r.shape, UNDECIDED)
        margin = np.full(r.shape, -np.inf)
        status[q_val.hi <= 0] = VACUOUS
        active = q_val.hi > 0
        w_val = w(r, t, row_sum)
        lhs = w_val - q_val if ordered else w_val
        below = active & (t.hi <= task.t_floor)
        small = below & (r.hi <= r_small) & (lhs.lo > 0) & (not ordered)
        status[small] = PASS
        status[below & ~small] = EXCLUDED
        idx = np.flatnonzero(active & (t.lo >= task.t_floor))
        if idx.size:
            rr, tt = r[idx], t[idx]
            big_v = v_scaled(rr, tt, row_sum, kappa, t_floor=task.t_floor)
            rhs = big_v - sqrt(rr) * q_val[idx] if ordered else big_v
            left = lhs[idx]
            certain = q_val[idx].lo > 0
            status[idx] = np.where(
                (left.lo > 0) & (rhs.lo > 0),
                PASS,
                np.where(((left.hi < 0) | (rhs.hi < 0)) & certain, FAIL, UNDECIDED),
            )
            margin[idx] = np.minimum(left.lo, rhs.lo)
        return status, margin

    lo, hi = grid_boxes([_r_edges(task.grid[0]), t_edges(task.grid[1], task.t_floor, FLOOR_CELLS // 5)])
    return sweep_boxes(evaluate, lo, hi, task.depth)


def _qs_boundary(task: QsTask) -> SweepResult:
    """kappa f(t) <= max(0, q(1, t)) over t x beta; below t_floor f is bounded by f(t_floor)."""

    def evaluate(lo: np.ndarray, hi: np.ndarray):
        t = Interval(lo[:, 0], hi[:, 0])
        beta = Interval(lo[:, 1], hi[:, 1])
        params = ConeParams.from_beta(beta)
        _, q, _ = qs_sums(task, params)
        q_val = w_boundary(t, q)
        rhs_lo = np.maximum(q_val.lo, 0.0)
        rhs_hi = np.maximum(q_val.hi, 0.0)
        kappa = kappa_for(beta)
        status = np.full(t.shape, UNDECIDED)
        margin = np.full(t.shape, -np.inf)
        below = t.hi <= task.t_floor
        k = truncation_index(task.t_floor)
        if np.any(below):
            idx = np.flatnonzero(below)
            # f increases with t, so f(t_floor) bounds f on [-1, t_floor]
            bound = (kappa[idx] * eval_f(Interval(task.t_floor), beta[idx], 0, k).value).hi
            status[idx] = np.where(bound <= rhs_lo[idx], PASS, UNDECIDED)
            margin[idx] = rhs_lo[idx] - bound
        idx = np.flatnonzero(~below)
        if idx.size:
            lhs = kappa[idx] * eval_f_banded(t[idx], beta[idx], 0, task.t_floor)
            status[idx] = np.where(
                lhs.hi <= rhs_lo[idx], PASS, np.where(lhs.lo > rhs_hi[idx], FAIL, UNDECIDED)
            )
            margin[idx] = rhs_lo[idx] - lhs.hi
        return status, margin

    lo, hi = grid_boxes(
        [
            t_edges(task.boundary_grid[0], task.t_floor, FLOOR_CELLS // 5),
            _beta_edges(task.c_lo, task.c_hi, task.boundary_grid[1]),
        ]
    )
    return sweep_boxes(evaluate, lo, hi, task.depth)


def run_qs_task(task: QsTask) -> SubintervalResult:
    notes = {"check": task.check, "family": task.family, "variant": task.variant}
    try:
        params = ConeParams.from_c(Interval(task.c_lo, task.c_hi))
        if task.check == "gradient":
            sweep = _qs_gradient(task, params)
        elif task.check == "inclusion":
            sweep = _qs_inclusion(task, params)
        elif task.check == "boundary":
            sweep = _qs_boundary(task)
        else:
            raise ValueError(f"Unknown q_s check '{task.check}'")
        logger.info(
            "q_s %s/%s %s c=[%r, %r]: %d failed cells",
            task.family,
            task.variant,
            task.check,
            task.c_lo,
            task.c_hi,
            len(sweep.failures),
        )
        return SubintervalResult(c=(task.c_lo, task.c_hi), sweep=sweep, notes=notes)
    except CertifyError as e:
        logger.warning("q_s %s c=[%r, %r] not processed: %s", task.check, task.c_lo, task.c_hi, e)
        return SubintervalResult(c=(task.c_lo, task.c_hi), sweep=SweepResult(), notes=notes, error=str(e))


def qs_family(c_range: Tuple[str, str]) -> str:
    key = (str(Fraction(c_range[0])), str(Fraction(c_range[1])))
    if key == tuple(str(Fraction(x)) for x in QS_LINEAR_RANGE):
        return "linear"
    if key == tuple(str(Fraction(x)) for x in QS_PIECEWISE_RANGE):
        return "piecewise"
    raise DomainError(
        f"q_s checks are defined for c in [{QS_LINEAR_RANGE[0]}, {QS_LINEAR_RANGE[1]}] "
        f"or [{QS_PIECEWISE_RANGE[0]}, {QS_PIECEWISE_RANGE[1]}], got {c_range}"
    )


def _qs_row(table: CoefficientTable, c_range: Tuple[str, str]) -> SupersolutionRow:
    lo = Fraction(c_range[0])
    for row in table.rows:
        if Fraction(row.c_lo) <= lo < Fraction(row.c_hi):
            return row
    raise DomainError(f"no coefficient row starts at c = {c_range[0]}")


def verify_qs(
    c_range: Tuple[str, str],
    table: CoefficientTable,
    variant: str = "harmonic",
    grid: Tuple[int, int] = QS_GRID,
    depth: int = DEFAULT_DEPTH,
    t_floor: float = T_FLOOR,
    threads: int = 1,
) -> GridCertificate:
    """
    Gradient bound, support or order inclusion, and boundary comparison for a q_s family.

    Args:
        c_range: ("0", "0.3") for the linear family or ("0.3", "0.4") for the piecewise one
        table: Coefficient rows; the row starting at c_range[0] supplies a_n and epsilon
        variant: "harmonic" (with r^alpha_n) or "as_written" (piecewise family only)
        grid: (r cells, t cells) for the ball sweeps
        depth: Adaptive bisection depth
        t_floor: Lowest t evaluated with series enclosures
        threads: Worker processes

    Returns:
        GridCertificate with one subinterval result per check and c-subinterval
    """
    if variant not in QS_VARIANTS:
        raise ValueError(f"Unknown variant '{variant}'. Valid: {', '.join(QS_VARIANTS)}")
    family = qs_family(c_range)
    row = _qs_row(table, c_range)
    lo, hi = Fraction(c_range[0]), Fraction(c_range[1])
    subintervals = [
        bounds
        for (a, b), bounds in zip(row.c_subintervals, row.subinterval_bounds())
        if lo <= Fraction(a) and Fraction(b) <= hi
    ]
    tasks = [
        QsTask(family, check, variant, row, c_lo, c_hi, grid, QS_BOUNDARY_GRID, depth, t_floor)
        for check in ("gradient", "inclusion", "boundary")
        for c_lo, c_hi in subintervals
    ]
    certificate = GridCertificate(
        f"qs/{family}/{variant}",
        {
            "c_range": list(c_range),
            "row": row.id,
            "variant": variant,
            "grid": list(grid),
            "depth": depth,
            "s": str(QS_S) if family == "linear" else "0",
        },
    )
    if family == "piecewise":
        breaks = piecewise_breaks()
        certificate.parameters["breakpoints"] = breaks
        for item in breaks:
            if not item["continuous"]:
                certificate.notes.append(f"{item['function']} is discontinuous at s = {item['s']}")
    for result in map_tasks(run_qs_task, tasks, threads):
        certificate.add(result)
    return certificate
