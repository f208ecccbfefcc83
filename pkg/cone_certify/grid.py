"""
Adaptive interval sweeps over boxes, and the worker pool that runs them.

A box batch is a pair of arrays ``lo``/``hi`` of shape (N, d). The evaluator
returns, per box, a status code and a lower bound of the certified margin
(the quantity that must be positive). Undecided boxes are bisected in every
non-degenerate coordinate until the depth limit; what is still undecided
then is a failure.

All reductions are order-independent: counts are sums and the reported
minimum is chosen by (margin, lo, hi) lexicographically, so results do not
depend on batch order or on the number of workers.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

PASS = 0
VACUOUS = 1
EXCLUDED = 2
UNDECIDED = 3
# margin certified negative: no bisection can help
FAIL = 4

STATUS_NAMES = {
    PASS: "pass",
    VACUOUS: "vacuous",
    EXCLUDED: "excluded",
    UNDECIDED: "undecided",
    FAIL: "fail",
}

CHUNK = 1 << 15

Evaluate = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class CellRecord:
    """One box with its status and margin lower bound."""

    lo: Tuple[float, ...]
    hi: Tuple[float, ...]
    status: str
    margin: float
    depth: int = 0

    def key(self) -> Tuple:
        return (self.margin, self.lo, self.hi)


@dataclass
class SweepResult:
    """Aggregate of an adaptive sweep."""

    counts: dict = field(default_factory=lambda: {name: 0 for name in STATUS_NAMES.values()})
    failures: List[CellRecord] = field(default_factory=list)
    excluded: List[CellRecord] = field(default_factory=list)
    minimum: Optional[CellRecord] = None
    max_depth: int = 0
    evaluated: int = 0

    @property
    def passed(self) -> bool:
        """No failed cells and none left without a bound."""
        return not self.failures and not self.excluded

    def merge(self, other: "SweepResult") -> "SweepResult":
        merged = SweepResult()
        for name in merged.counts:
            merged.counts[name] = self.counts.get(name, 0) + other.counts.get(name, 0)
        merged.failures = sorted(self.failures + other.failures, key=CellRecord.key)
        merged.excluded = sorted(self.excluded + other.excluded, key=CellRecord.key)
        merged.minimum = _smaller(self.minimum, other.minimum)
        merged.max_depth = max(self.max_depth, other.max_depth)
        merged.evaluated = self.evaluated + other.evaluated
        return merged


def _smaller(a: Optional[CellRecord], b: Optional[CellRecord]) -> Optional[CellRecord]:
    if a is None:
        return b
    if b is None:
        return a
    return a if a.key() <= b.key() else b


def _record(lo: np.ndarray, hi: np.ndarray, status: int, margin: float, depth: int) -> CellRecord:
    return CellRecord(
        lo=tuple(float(x) for x in lo),
        hi=tuple(float(x) for x in hi),
        status=STATUS_NAMES.get(status, "fail"),
        margin=float(margin),
        depth=depth,
    )


def grid_boxes(edges: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Tensor tiling from per-axis edge arrays; returns (lo, hi) of shape (N, d)."""
    lows = np.meshgrid(*[e[:-1] for e in edges], indexing="ij")
    highs = np.meshgrid(*[e[1:] for e in edges], indexing="ij")
    lo = np.stack([x.ravel() for x in lows], axis=1)
    hi = np.stack([x.ravel() for x in highs], axis=1)
    return lo, hi


def bisect_boxes(lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split each box at the midpoint of every coordinate with positive width."""
    for axis in range(lo.shape[1]):
        mid = 0.5 * lo[:, axis] + 0.5 * hi[:, axis]
        splittable = (mid > lo[:, axis]) & (mid < hi[:, axis])
        left_hi = hi.copy()
        left_hi[splittable, axis] = mid[splittable]
        right_lo = lo[splittable].copy()
        right_lo[:, axis] = mid[splittable]
        lo = np.concatenate([lo, right_lo])
        hi = np.concatenate([left_hi, hi[splittable]])
    return lo, hi


def sweep_boxes(evaluate: Evaluate, lo: np.ndarray, hi: np.ndarray, depth: int) -> SweepResult:
    """
    Certify every box, bisecting undecided ones up to ``depth`` times.

    Args:
        evaluate: Vectorised evaluator returning (status codes, margin lower bounds)
        lo: Lower corners, shape (N, d)
        hi: Upper corners, shape (N, d)
        depth: Maximum bisection depth

    Returns:
        SweepResult with counts, the minimum-margin passing cell and all failures
    """
    result = SweepResult()
    level = 0
    while lo.shape[0]:
        pending_lo, pending_hi = [], []
        for start in range(0, lo.shape[0], CHUNK):
            chunk_lo, chunk_hi = lo[start : start + CHUNK], hi[start : start + CHUNK]
            status, margin = evaluate(chunk_lo, chunk_hi)
            status = np.asarray(status)
            margin = np.asarray(margin, dtype=np.float64)
            result.evaluated += chunk_lo.shape[0]

            passed = np.flatnonzero(status == PASS)
            result.counts["pass"] += passed.size
            result.counts["vacuous"] += int(np.sum(status == VACUOUS))
            if passed.size:
                order = np.lexsort(
                    tuple(chunk_hi[passed].T[::-1]) + tuple(chunk_lo[passed].T[::-1]) + (margin[passed],)
                )
                best = passed[order[0]]
                candidate = _record(chunk_lo[best], chunk_hi[best], PASS, margin[best], level)
                result.minimum = _smaller(result.minimum, candidate)

            for i in np.flatnonzero(status == EXCLUDED):
                result.excluded.append(_record(chunk_lo[i], chunk_hi[i], EXCLUDED, margin[i], level))
            result.counts["excluded"] += int(np.sum(status == EXCLUDED))

            for i in np.flatnonzero(status == FAIL):
                result.failures.append(_record(chunk_lo[i], chunk_hi[i], FAIL, margin[i], level))
            result.counts["fail"] += int(np.sum(status == FAIL))

            undecided = status == UNDECIDED
            if level >= depth:
                for i in np.flatnonzero(undecided):
                    result.failures.append(_record(chunk_lo[i], chunk_hi[i], UNDECIDED, margin[i], level))
                result.counts["undecided"] += int(np.sum(undecided))
            elif np.any(undecided):
                pending_lo.append(chunk_lo[undecided])
                pending_hi.append(chunk_hi[undecided])
        if not pending_lo:
            break
        lo, hi = bisect_boxes(np.concatenate(pending_lo), np.concatenate(pending_hi))
        level += 1
        result.max_depth = level
        logger.debug("sweep level %d: %d boxes", level, lo.shape[0])
    result.failures.sort(key=CellRecord.key)
    result.excluded.sort(key=CellRecord.key)
    return result


def map_tasks(func: Callable, tasks: Iterable, threads: int = 1) -> List:
    """Order-preserving map, over a process pool when ``threads`` > 1."""
    tasks = list(tasks)
    if threads <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, tasks))
