"""1-Wasserstein distance between persistence diagrams."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cubical import PersistenceDiagram

MAX_POINTS = 64


def _points(d: PersistenceDiagram, dim: int) -> np.ndarray:
    sel = d.select(dim)
    return np.column_stack([sel.birth, sel.death]).reshape(-1, 2)


def wasserstein1(a: PersistenceDiagram, b: PersistenceDiagram, dim: int) -> float:
    """Optimal matching cost with L-inf ground distance and diagonal projections."""
    p, q = _points(a, dim), _points(b, dim)
    n, m = len(p), len(q)
    if n > MAX_POINTS or m > MAX_POINTS:
        raise ValueError(f"diagrams have {n} and {m} points in dim {dim}; limit is {MAX_POINTS}")
    if n == 0 and m == 0:
        return 0.0

    # L-inf distance from (b, d) to the diagonal is (b - d) / 2
    diag_p = np.abs(p[:, 0] - p[:, 1]) / 2.0
    diag_q = np.abs(q[:, 0] - q[:, 1]) / 2.0
    cost = np.zeros((n + m, n + m))
    cost[:n, :m] = np.max(np.abs(p[:, None, :] - q[None, :, :]), axis=2)
    cost[:n, m:] = np.inf
    cost[:n, m:][np.arange(n), np.arange(n)] = diag_p
    cost[n:, :m] = np.inf
    cost[n:, :m][np.arange(m), np.arange(m)] = diag_q
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())
