"""
Subsolution certificate: G_c'(t) > 0 between t_c and 1.

With f = f_c, g = g_c and sigma = (9/4)/(1 + c^2),

    G = sigma f^2 + (1 - t^2) (f' - f g'/g)^2

and, since g >= 1, positivity of G' is certified through

    g^3 G' = 2 sigma f f' g^3 - 2 t (f'g - f g')^2 g
             + 2 (1 - t^2) (f'g - f g') (f''g^2 - f'g'g - f g''g + f g'^2).

g^3 G' is invariant in sign under scaling f, so the unnormalised series
(a_0 = 1) is used; G itself takes an optional scale.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .certificate import GridCertificate, SubintervalResult
from .chebyshev import ChebModel, fit_series_models
from .cone import ConeParams, one_minus_t_sq
from .errors import CertificationFailure, CertifyError
from .grid import PASS, FAIL, UNDECIDED, SweepResult, grid_boxes, map_tasks, sweep_boxes
from .interval import Interval, IntervalLike, as_interval, powi
from .legendre import eval_all, eval_g_all, g_parameter, truncation_index
from .roots import find_t_c, normalization

logger = logging.getLogger(__name__)

C_RANGE = ("0", "0.58828")
DEFAULT_N_C = 256
DEFAULT_GRID = (512, 8)
DEFAULT_DEPTH = 6
PAPER_SCALE_GRID = (10000, 1000)

Derivatives = Tuple[Interval, Interval, Interval, Interval, Interval, Interval]


def derivatives(
    t: IntervalLike, beta: IntervalLike, k: Optional[int] = None, models: Optional[Dict[int, ChebModel]] = None
) -> Derivatives:
    """f, f', f'', g, g', g'' over the box, by series or by interpolation models."""
    t = as_interval(t)
    beta = as_interval(beta)
    if models is not None:
        g_beta = g_parameter(beta)
        f_values = tuple(models[j](t, beta) for j in (0, 1, 2))
        g_values = tuple(models[j](t, g_beta) for j in (0, 1, 2))
    else:
        if k is None:
            k = truncation_index(float(np.min(t.lo)))
        f_values = eval_all(t, beta, k)
        g_values = eval_g_all(t, beta, k)
    return f_values + g_values  # type: ignore[return-value]


def _check_g(g: Interval) -> None:
    if np.any(g.lo <= 0):
        raise CertificationFailure("g enclosure touches 0")


def G(
    t: IntervalLike,
    params: ConeParams,
    k: Optional[int] = None,
    scale: Optional[IntervalLike] = None,
    models: Optional[Dict[int, ChebModel]] = None,
) -> Interval:
    """Enclosure of sigma f^2 + (1 - t^2)(f' - f g'/g)^2, with f multiplied by ``scale``."""
    t = as_interval(t)
    f, df, _, g, dg, _ = derivatives(t, params.beta, k, models)
    _check_g(g)
    if scale is not None:
        f = f * scale
        df = df * scale
    return params.sigma * powi(f, 2) + one_minus_t_sq(t) * powi(df - f * dg / g, 2)


def g3_G_prime(
    t: IntervalLike,
    params: ConeParams,
    k: Optional[int] = None,
    models: Optional[Dict[int, ChebModel]] = None,
) -> Interval:
    """Enclosure of g^3 G'(t)."""
    t = as_interval(t)
    f, df, d2f, g, dg, d2g = derivatives(t, params.beta, k, models)
    _check_g(g)
    wronskian = df * g - f * dg
    inner = d2f * powi(g, 2) - df * dg * g - f * d2g * g + f * powi(dg, 2)
    return (
        2.0 * params.sigma * f * df * powi(g, 3)
        - 2.0 * t * powi(wronskian, 2) * g
        + 2.0 * one_minus_t_sq(t) * wronskian * inner
    )


def boundary_identity(c: IntervalLike) -> Interval:
    """G(t_c) for the normalised homogeneous solution; encloses 1."""
    params = ConeParams.from_c(c)
    t_c = find_t_c(params.c).interval
    kappa = normalization(params.beta, roots=t_c)
    return G(t_c, params, scale=kappa)


@dataclass(frozen=True)
class SubsolutionTask:
    c_lo: float
    c_hi: float
    n_t: int
    n_beta: int
    depth: int
    models: Optional[Dict[int, ChebModel]] = None


def _edges(lo: float, hi: float, n: int) -> np.ndarray:
    edges = np.linspace(lo, hi, n + 1)
    edges[0], edges[-1] = lo, hi
    return edges


def certify_subinterval(task: SubsolutionTask) -> SubintervalResult:
    """Sweep [t_c.lo, 1] x beta_c for one c-subinterval."""
    c = Interval(task.c_lo, task.c_hi)
    try:
        params = ConeParams.from_c(c)
        t_c = find_t_c(c).interval
        t_lo = float(t_c.lo)
        k = truncation_index(t_lo)
        lo, hi = grid_boxes(
            [
                _edges(t_lo, 1.0, task.n_t),
                _edges(float(params.beta.lo), float(params.beta.hi), task.n_beta),
            ]
        )

        def evaluate(box_lo: np.ndarray, box_hi: np.ndarray):
            t = Interval(box_lo[:, 0], box_hi[:, 0])
            beta = Interval(box_lo[:, 1], box_hi[:, 1])
            value = g3_G_prime(t, ConeParams.from_beta(beta), k, task.models)
            status = np.where(value.lo > 0, PASS, np.where(value.hi < 0, FAIL, UNDECIDED))
            return status, value.lo

        sweep = sweep_boxes(evaluate, lo, hi, task.depth)
        notes = {"t_c": [repr(float(t_c.lo)), repr(float(t_c.hi))], "k": k}
        logger.info(
            "subsolution c=[%r, %r]: %d pass, %d failed",
            task.c_lo,
            task.c_hi,
            sweep.counts["pass"],
            len(sweep.failures),
        )
        return SubintervalResult(c=(task.c_lo, task.c_hi), sweep=sweep, notes=notes)
    except CertifyError as e:
        logger.warning("subsolution c=[%r, %r] not processed: %s", task.c_lo, task.c_hi, e)
        return SubintervalResult(c=(task.c_lo, task.c_hi), sweep=SweepResult(), error=str(e))


def c_subintervals(c_range: Tuple, n_c: int) -> np.ndarray:
    """Edges of n_c subintervals covering the outward enclosure of ``c_range``."""
    lo = Interval.from_text(str(c_range[0])).lo
    hi = Interval.from_text(str(c_range[1])).hi
    return _edges(float(lo), float(hi), n_c)


def verify_subsolution(
    c_range: Tuple = C_RANGE,
    n_c: int = DEFAULT_N_C,
    n_t: int = DEFAULT_GRID[0],
    n_beta: int = DEFAULT_GRID[1],
    depth: int = DEFAULT_DEPTH,
    mode: str = "direct",
    threads: int = 1,
    models: Optional[Dict[int, ChebModel]] = None,
) -> GridCertificate:
    """
    Certify g^3 G' > 0 on [t_c, 1] for every c in ``c_range``.

    Args:
        c_range: (c_lo, c_hi) as decimal strings or floats
        n_c: Number of c-subintervals
        n_t: t-cells per subinterval
        n_beta: beta-cells per subinterval
        depth: Adaptive bisection depth
        mode: "direct" (series) or "interp" (Chebyshev models)
        threads: Worker processes
        models: Models for interp mode (fitted on demand when omitted)

    Returns:
        GridCertificate for the claim
    """
    if mode not in ("direct", "interp"):
        raise ValueError(f"Unknown mode '{mode}'. Valid: direct, interp")
    if mode == "interp" and models is None:
        models = fit_series_models()
    edges = c_subintervals(c_range, n_c)
    tasks = [
        SubsolutionTask(float(a), float(b), n_t, n_beta, depth, models if mode == "interp" else None)
        for a, b in zip(edges[:-1], edges[1:])
    ]
    parameters = {
        "c_range": [str(c_range[0]), str(c_range[1])],
        "n_c": n_c,
        "grid": [n_t, n_beta],
        "depth": depth,
        "mode": mode,
    }
    if models is not None and mode == "interp":
        parameters["model"] = {
            "degrees": list(models[0].degrees),
            "rho": list(models[0].rho),
            "error_bounds": [models[j].error_bound for j in (0, 1, 2)],
            "modulus_bounds": [models[j].modulus_bound for j in (0, 1, 2)],
        }
    certificate = GridCertificate("subsolution", parameters)
    for result in map_tasks(certify_subinterval, tasks, threads):
        certificate.add(result)
    return certificate
