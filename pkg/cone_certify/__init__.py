"""
cone-certify

Validated numerics for homogeneous solutions of the one-phase free boundary
problem on three-dimensional cones: interval arithmetic, Legendre series
enclosures, verified roots and grid certificates with auditable reports.
"""

__version__ = "0.1.0"

from .config import RunConfig, load_rows
from .core import Verifier
from .interval import Interval

__all__ = ["Interval", "RunConfig", "Verifier", "load_rows"]
