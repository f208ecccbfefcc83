"""
Tensor Chebyshev interpolation with Bernstein-ellipse error bounds.

A model interpolates a rigorously evaluable function of (t, beta) through
Chebyshev-Lobatto nodes on a rectangle. Coefficients are enclosed in interval
arithmetic from node enclosures, so evaluating the model gives an enclosure
of the exact interpolant; adding the analytic error bound E gives an
enclosure of the target function itself.

Per variable, a function analytic with modulus <= M inside the Bernstein
ellipse of parameter rho is interpolated at n + 1 Lobatto nodes with error
at most 4 M rho^-n / (rho - 1). The two-variable bound is

    E = E_t + Lambda(n_t) E_beta,    Lambda(n) <= 1 + (2/pi) ln(n + 1)

where Lambda is the Lebesgue constant of the t-interpolation.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import BoundUnavailable, DomainError
from .interval import PI, Interval, as_interval, cospi, log, powi
from .legendre import coefficient_majorants, eval_f, falling, truncation_index

logger = logging.getLogger(__name__)

Domain = Tuple[Tuple[float, float], Tuple[float, float]]

MODEL_FORMAT_VERSION = 1

# Box and ellipse parameters of the published bounds table.
PUBLISHED_DOMAIN: Domain = ((-0.204, 1.0), (-0.161, 2.0))
PUBLISHED_RHO = (2.9, 30.0)
PUBLISHED_BOUNDS = {0: 12402.0, 1: 146200.0, 2: 553380.0}

# Default interpolation box: covers t_c for c <= 0.6 and -beta/8 for beta in [1.47, 2].
DEFAULT_DOMAIN: Domain = ((-0.3, 1.0), (-0.26, 2.0))
DEFAULT_RHO = (2.9, 30.0)
DEFAULT_DEGREES = (48, 48)

Evaluator = Callable[[Interval, Interval], Interval]


@dataclass(frozen=True)
class EllipseBound:
    """Modulus bound on a Bernstein-ellipse product and the truncation index it used."""

    modulus: float
    k: int
    r: float
    beta_modulus: float


@dataclass(frozen=True)
class ChebModel:
    """Tensor Chebyshev interpolant with a proven uniform error bound."""

    domain: Domain
    degrees: Tuple[int, int]
    coeffs: Interval
    rho: Tuple[float, float]
    modulus_bound: float
    error_bound: float
    derivative_order: int = 0
    digest: str = ""

    def __call__(self, t, beta) -> Interval:
        return eval_model(self, t, beta)


@dataclass
class ModulusBoundTable:
    """Our ellipse modulus bounds next to the published ones."""

    domain: Domain
    rho: Tuple[float, float]
    rows: List[Dict[str, float]] = field(default_factory=list)
    combined_bound: float = 0.0
    k: int = 0


def _ellipse_extent(lo: float, hi: float, rho: float) -> Tuple[float, float]:
    """Centre modulus and semi-major axis of the ellipse around [lo, hi] (upper bounds)."""
    m = (Interval(lo) + Interval(hi)) / 2.0
    h = (Interval(hi) - Interval(lo)) / 2.0
    semi = h * (Interval(rho) + 1.0 / Interval(rho)) / 2.0
    return float(m.mag), float(semi.hi)


def ellipse_r(t_domain: Tuple[float, float], rho_t: float) -> float:
    """Upper bound of |1 - t| over the Bernstein ellipse of the t-interval."""
    t_a, t_b = t_domain
    m = (Interval(t_a) + Interval(t_b)) / 2.0
    h = (Interval(t_b) - Interval(t_a)) / 2.0
    semi = h * (Interval(rho_t) + 1.0 / Interval(rho_t)) / 2.0
    return float(((1.0 - m).mag + semi).hi)


def published_k(beta_domain: Tuple[float, float], rho_beta: float) -> int:
    """k = ceil((a+b)/2 + (b-a)/2 (rho + 1/rho)) - 1."""
    a, b = beta_domain
    reach = (Interval(a) + Interval(b)) / 2.0 + (Interval(b) - Interval(a)) / 2.0 * (
        Interval(rho_beta) + 1.0 / Interval(rho_beta)
    )
    return int(math.ceil(float(reach.hi))) - 1


def ellipse_modulus_bound(
    domain: Domain, rho: Tuple[float, float], which: str = "f", j: int = 0
) -> EllipseBound:
    """
    Bound |f^(j)| (or |g^(j)|) on the product of Bernstein ellipses around the domain.

    Args:
        domain: ((t_a, t_b), (beta_a, beta_b))
        rho: Ellipse parameters (rho_t, rho_beta), both > 1
        which: "f" or "g"
        j: Derivative order, 0..2

    Returns:
        EllipseBound with the modulus bound M and the truncation index k

    Raises:
        BoundUnavailable: If the t-ellipse reaches |1 - t| >= 2
    """
    if which not in ("f", "g"):
        raise ValueError(f"Unknown function '{which}'. Valid: f, g")
    if j not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {j}")
    rho_t, rho_beta = rho
    if rho_t <= 1.0 or rho_beta <= 1.0:
        raise ValueError(f"ellipse parameters must exceed 1, got {rho}")

    r = ellipse_r(domain[0], rho_t)
    if r >= 2.0:
        raise BoundUnavailable(f"t-ellipse reaches |1-t| = {r} >= 2 for rho_t = {rho_t}")

    centre, semi = _ellipse_extent(domain[1][0], domain[1][1], rho_beta)
    beta_modulus = float((Interval(centre) + Interval(semi)).hi)
    if which == "g":
        beta_modulus = float((Interval(beta_modulus) / 8.0).hi)
    k = max(published_k(domain[1], rho_beta), int(math.ceil(beta_modulus)) - 1)

    majorants = coefficient_majorants(beta_modulus, k)
    r_i = Interval(r)
    total = Interval(0.0)
    for n in range(j, k + 1):
        total = total + float(falling(n, j)) * Interval(majorants[n]) * powi(r_i, n - j)
    # tail with constant |a_k|, valid because k + 1 >= |beta| on the ellipse
    n_start = k + 1
    tail = Interval(0.0)
    for i in range(j + 1):
        fall = falling(n_start, j - i)
        term = float(math.comb(j, i) * fall * math.factorial(i)) * powi(r_i, n_start - j + i)
        tail = tail + term / powi(2.0 - r_i, 1 + i)
    modulus = float((total + Interval(majorants[k]) * tail).hi)
    logger.debug("ellipse bound %s^(%d): M=%.6g k=%d r=%.4f", which, j, modulus, k, r)
    return EllipseBound(modulus=modulus, k=k, r=r, beta_modulus=beta_modulus)


def lebesgue_bound(n: int) -> float:
    return float((1.0 + 2.0 / PI * log(Interval(float(n + 1)))).hi)


def error_bound(modulus: float, rho: Tuple[float, float], degrees: Tuple[int, int]) -> float:
    """E = E_t + Lambda(n_t) E_beta with E_x = 4 M rho_x^-n_x / (rho_x - 1)."""

    def per_variable(rho_x: float, n_x: int) -> Interval:
        rho_i = Interval(rho_x)
        return 4.0 * Interval(modulus) / (powi(rho_i, n_x) * (rho_i - 1.0))

    e_t = per_variable(rho[0], degrees[0])
    e_beta = per_variable(rho[1], degrees[1])
    return float((e_t + Interval(lebesgue_bound(degrees[0])) * e_beta).hi)


def lobatto_nodes(lo: float, hi: float, n: int) -> Interval:
    """Enclosures of the n + 1 Chebyshev-Lobatto nodes cos(pi i / n) mapped to [lo, hi]."""
    x = cospi(np.arange(n + 1), n)
    m = (Interval(lo) + Interval(hi)) / 2.0
    h = (Interval(hi) - Interval(lo)) / 2.0
    nodes = m + h * x
    return Interval(np.clip(nodes.lo, lo, hi), np.clip(nodes.hi, lo, hi))


def _transform_matrix(n: int) -> Interval:
    """A[j, i] with c = A f for Lobatto interpolation on n + 1 nodes."""
    i = np.arange(n + 1)
    cos_ij = cospi(np.outer(i, i), n)
    weights = np.full(n + 1, 1.0)
    weights[0] = weights[-1] = 0.5
    return cos_ij * np.outer(weights, weights) * 2.0 / float(n)


def _interval_matmul(a: Interval, b: Interval) -> Interval:
    acc = Interval(np.zeros((a.shape[0], b.shape[1])))
    for i in range(a.shape[1]):
        acc = acc + a[:, i : i + 1] * b[i : i + 1, :]
    return acc


def fit(
    evaluator: Evaluator,
    domain: Domain,
    degrees: Tuple[int, int],
    rho: Tuple[float, float],
    modulus: float,
    derivative_order: int = 0,
    digest: str = "",
) -> ChebModel:
    """
    Interpolate ``evaluator`` through tensor Lobatto nodes.

    Args:
        evaluator: Sound vectorised enclosure of the target on (t, beta) boxes
        domain: ((t_a, t_b), (beta_a, beta_b))
        degrees: (n_t, n_beta), both >= 1
        rho: Ellipse parameters used to obtain ``modulus``
        modulus: Bound on the target over the ellipse product
        derivative_order: Recorded on the model
        digest: Content hash of the evaluator configuration

    Returns:
        ChebModel whose evaluations enclose the target
    """
    n_t, n_beta = degrees
    if n_t < 1 or n_beta < 1:
        raise ValueError(f"degrees must be at least 1, got {degrees}")
    t_nodes = lobatto_nodes(domain[0][0], domain[0][1], n_t)
    beta_nodes = lobatto_nodes(domain[1][0], domain[1][1], n_beta)
    values = evaluator(t_nodes.reshape(n_t + 1, 1), beta_nodes.reshape(1, n_beta + 1))
    values = Interval(np.broadcast_to(values.lo, (n_t + 1, n_beta + 1)),
                      np.broadcast_to(values.hi, (n_t + 1, n_beta + 1)))
    a_t = _transform_matrix(n_t)
    a_beta = _transform_matrix(n_beta)
    partial = _interval_matmul(a_t, values)
    coefficients = _interval_matmul(partial, Interval(a_beta.lo.T, a_beta.hi.T))
    bound = error_bound(modulus, rho, degrees)
    logger.info("fitted model j=%d degrees=%s E=%.3g", derivative_order, degrees, bound)
    return ChebModel(
        domain=domain,
        degrees=(n_t, n_beta),
        coeffs=coefficients,
        rho=rho,
        modulus_bound=modulus,
        error_bound=bound,
        derivative_order=derivative_order,
        digest=digest,
    )


def _chebyshev_values(x: Interval, n: int) -> List[Interval]:
    """T_0..T_n at x by the three-term recurrence, each clipped to [-1, 1]."""
    values = [Interval(np.ones(x.shape)), x]
    for _ in range(1, n):
        nxt = 2.0 * x * values[-1] - values[-2]
        values.append(Interval(np.clip(nxt.lo, -1.0, 1.0), np.clip(nxt.hi, -1.0, 1.0)))
    return values[: n + 1]


def _to_reference(x: Interval, lo: float, hi: float) -> Interval:
    m = (Interval(lo) + Interval(hi)) / 2.0
    h = (Interval(hi) - Interval(lo)) / 2.0
    ref = (x - m) / h
    return Interval(np.clip(ref.lo, -1.0, 1.0), np.clip(ref.hi, -1.0, 1.0))


def eval_model(model: ChebModel, t, beta) -> Interval:
    """
    Enclosure of the target over the box t x beta (broadcastable arrays allowed).

    Raises:
        DomainError: If the box leaves the model's domain
    """
    t = as_interval(t)
    beta = as_interval(beta)
    (t_a, t_b), (b_a, b_b) = model.domain
    if np.any(t.lo < t_a) or np.any(t.hi > t_b) or np.any(beta.lo < b_a) or np.any(beta.hi > b_b):
        raise DomainError(f"box outside model domain {model.domain}")
    n_t, n_beta = model.degrees
    shape = np.broadcast(t.lo, beta.lo).shape
    tx = _chebyshev_values(_to_reference(t, t_a, t_b), n_t)
    by = _chebyshev_values(_to_reference(beta, b_a, b_b), n_beta)
    # rows[j] = sum_m c[j, m] T_m(beta), all j at once
    expand = (n_t + 1,) + (1,) * len(shape)
    rows = Interval(np.zeros((n_t + 1,) + shape))
    for m in range(n_beta + 1):
        column = model.coeffs[:, m]
        rows = rows + column.reshape(*expand) * by[m]
    total = Interval(np.zeros(shape))
    for j in range(n_t + 1):
        total = total + rows[j] * tx[j]
    e = model.error_bound
    return total + Interval(-e, e)


class SeriesEvaluator:
    """Picklable evaluator of f^(j) by direct series enclosure."""

    def __init__(self, j: int, k: int):
        self.j = j
        self.k = k

    def __call__(self, t: Interval, beta: Interval) -> Interval:
        return eval_f(t, beta, self.j, self.k).value

    def describe(self) -> Dict[str, int]:
        return {"j": self.j, "k": self.k}


def config_digest(domain: Domain, degrees, rho, j: int, k: int) -> str:
    payload = json.dumps(
        {"domain": domain, "degrees": list(degrees), "rho": list(rho), "j": j, "k": k},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def fit_series_models(
    domain: Domain = DEFAULT_DOMAIN,
    degrees: Tuple[int, int] = DEFAULT_DEGREES,
    rho: Tuple[float, float] = DEFAULT_RHO,
    cache_dir: Optional[Path] = None,
) -> Dict[int, ChebModel]:
    """Models of f, f', f'' on ``domain``; g^(j) is read at -beta/8 from the same models."""
    k = truncation_index(domain[0][0], tol=1e-15)
    models = {}
    for j in (0, 1, 2):
        digest = config_digest(domain, degrees, rho, j, k)
        path = cache_dir / f"model_f{j}_{digest[:16]}.json" if cache_dir else None
        if path is not None and path.exists():
            models[j] = load_model(path, digest)
            continue
        bound = ellipse_modulus_bound(domain, rho, "f", j)
        models[j] = fit(SeriesEvaluator(j, k), domain, degrees, rho, bound.modulus, j, digest)
        if path is not None:
            save_model(models[j], path)
    return models


def save_model(model: ChebModel, path: Path) -> None:
    """Write a model as JSON with hex-float coefficient endpoints."""
    body = _model_body(model)
    document = {"body": body, "sha256": _body_digest(body)}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(document, f, indent=2)


def load_model(path: Path, expected_digest: Optional[str] = None) -> ChebModel:
    """
    Load a cached model, verifying its content hash and evaluator digest.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the content or configuration digest does not match
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Model cache not found: {path}")
    with open(path, "r") as f:
        document = json.load(f)
    body = document["body"]
    if _body_digest(body) != document.get("sha256"):
        raise ValueError(f"Model cache {path} is corrupted (content hash mismatch)")
    if body["version"] != MODEL_FORMAT_VERSION:
        raise ValueError(f"Unsupported model format version {body['version']}")
    if expected_digest is not None and body["digest"] != expected_digest:
        raise ValueError(f"Model cache {path} was built for a different configuration")
    lo = np.array([[float.fromhex(x) for x in row] for row in body["coeffs_lo"]])
    hi = np.array([[float.fromhex(x) for x in row] for row in body["coeffs_hi"]])
    domain = tuple(tuple(float.fromhex(x) for x in pair) for pair in body["domain"])
    return ChebModel(
        domain=domain,  # type: ignore[arg-type]
        degrees=tuple(body["degrees"]),  # type: ignore[arg-type]
        coeffs=Interval(lo, hi),
        rho=tuple(float.fromhex(x) for x in body["rho"]),  # type: ignore[arg-type]
        modulus_bound=float.fromhex(body["modulus_bound"]),
        error_bound=float.fromhex(body["error_bound"]),
        derivative_order=body["derivative_order"],
        digest=body["digest"],
    )


def _model_body(model: ChebModel) -> Dict:
    return {
        "version": MODEL_FORMAT_VERSION,
        "domain": [[float(x).hex() for x in pair] for pair in model.domain],
        "degrees": list(model.degrees),
        "rho": [float(x).hex() for x in model.rho],
        "modulus_bound": float(model.modulus_bound).hex(),
        "error_bound": float(model.error_bound).hex(),
        "derivative_order": model.derivative_order,
        "digest": model.digest,
        "coeffs_lo": [[float(x).hex() for x in row] for row in model.coeffs.lo],
        "coeffs_hi": [[float(x).hex() for x in row] for row in model.coeffs.hi],
    }


def _body_digest(body: Dict) -> str:
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def modulus_bound_table(
    domain: Domain = PUBLISHED_DOMAIN, rho: Tuple[float, float] = PUBLISHED_RHO
) -> ModulusBoundTable:
    """
    Ellipse bounds for f, g and their first two derivatives beside the published values.

    Also computes the combined bound on |g^3 G'| over the ellipse product,

        2 B_sigma M1 M2 M1^3 + 8 B_t M1^3 M2^2
            + 4 (1 + B_t^2) (M1 M2) (M3 M1^2 + M1^2 M2 + M1^2 M3 + M1 M2^2)

    with B_t the modulus bound of t and B_sigma = (9/8) B_beta.
    """
    table = ModulusBoundTable(domain=domain, rho=rho)
    m = {}
    for j in (0, 1, 2):
        f_bound = ellipse_modulus_bound(domain, rho, "f", j)
        g_bound = ellipse_modulus_bound(domain, rho, "g", j)
        m[j] = max(f_bound.modulus, g_bound.modulus)
        table.k = f_bound.k
        table.rows.append(
            {
                "derivative": j,
                "f": f_bound.modulus,
                "g": g_bound.modulus,
                "published": PUBLISHED_BOUNDS[j],
            }
        )
    t_centre, t_semi = _ellipse_extent(domain[0][0], domain[0][1], rho[0])
    b_centre, b_semi = _ellipse_extent(domain[1][0], domain[1][1], rho[1])
    b_t = Interval(t_centre) + Interval(t_semi)
    b_sigma = 9.0 / 8.0 * (Interval(b_centre) + Interval(b_semi))
    m1, m2, m3 = Interval(m[0]), Interval(m[1]), Interval(m[2])
    combined = (
        2.0 * b_sigma * m1 * m2 * powi(m1, 3)
        + 8.0 * b_t * powi(m1, 3) * powi(m2, 2)
        + 4.0 * (1.0 + b_t * b_t) * (m1 * m2)
        * (m3 * m1 * m1 + m1 * m1 * m2 + m1 * m1 * m3 + m1 * m2 * m2)
    )
    table.combined_bound = float(combined.hi)
    return table
