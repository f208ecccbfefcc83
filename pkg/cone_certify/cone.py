"""Cone parameters and the squared gradient on the cone."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .interval import Interval, IntervalLike, as_interval, powi, sqrt


@dataclass(frozen=True)
class ConeParams:
    """
    Parameters of the cone x4 = c |x|.

    beta = 2 / (1 + c^2) is the Legendre parameter of the homogeneous
    solution and sigma = (9/4) / (1 + c^2) = 9 beta / 8.
    """

    c: Interval
    beta: Interval
    sigma: Interval

    @classmethod
    def from_c(cls, c: IntervalLike) -> "ConeParams":
        c = as_interval(c)
        if np.any(c.lo < 0):
            raise DomainError(f"cone parameter must be non-negative, got {c!r}")
        denominator = 1.0 + powi(c, 2)
        return cls(c=c, beta=2.0 / denominator, sigma=2.25 / denominator)

    @classmethod
    def from_beta(cls, beta: IntervalLike) -> "ConeParams":
        """Parameters for a beta box; c is recovered as sqrt(2/beta - 1)."""
        beta = as_interval(beta)
        if np.any(beta.lo <= 0) or np.any(beta.hi > 2.0):
            raise DomainError(f"beta must lie in (0, 2], got {beta!r}")
        ratio = 2.0 / beta - 1.0
        ratio = Interval(np.maximum(ratio.lo, 0.0), np.maximum(ratio.hi, 0.0))
        return cls(c=sqrt(ratio), beta=beta, sigma=9.0 / 8.0 * beta)

    @property
    def one_plus_c_sq(self) -> Interval:
        """1 + c^2 = 2 / beta."""
        return 2.0 / self.beta


def one_minus_t_sq(t: IntervalLike) -> Interval:
    """(1 - t)(1 + t), clipped at 0 for t within [-1, 1]."""
    t = as_interval(t)
    value = (1.0 - t) * (1.0 + t)
    return Interval(np.maximum(value.lo, 0.0), np.maximum(value.hi, 0.0))


def cone_grad_sq(
    u_r: Interval, u_t_over_r: Interval, t: IntervalLike, one_plus_c_sq: Interval
) -> Interval:
    """|grad u|^2 = u_r^2 / (1 + c^2) + (1 - t^2) (u_t / r)^2 in (r, t = cos phi) coordinates."""
    return powi(u_r, 2) / one_plus_c_sq + one_minus_t_sq(t) * powi(u_t_over_r, 2)
