"""Generational distance, its inverse, and grid sampling of fitted models.

Distances are computed pairwise and exactly (no spatial index); the sets this
package produces are small enough that the quadratic pass finishes in seconds.
The reductions are arranged so results match a naive per-pair computation
bit for bit.
"""

from __future__ import annotations

import numpy as np

from .bezier import BezierSimplex
from .errors import DimensionError
from .fitting import barycentric_grid
from .pareto import SampleSet

_BLOCK_ROWS = 256


def grid_sample(model: BezierSimplex, resolution: int) -> SampleSet:
    """Model values on the barycentric grid with the given denominator.

    Yields C(resolution + m - 1, m - 1) points in R^ambient.
    """
    grid = barycentric_grid(model.m, resolution)
    return SampleSet(model.evaluate_batch(grid))


def _points(obj) -> np.ndarray:
    if isinstance(obj, SampleSet):
        return obj.objectives
    return np.atleast_2d(np.asarray(obj, dtype=float))


def _min_dists(X: np.ndarray, Y: np.ndarray, want_cols: bool):
    row_mins = np.empty(X.shape[0])
    col_mins = np.full(Y.shape[0], np.inf) if want_cols else None
    for start in range(0, X.shape[0], _BLOCK_ROWS):
        block = X[start : start + _BLOCK_ROWS]
        d = np.sqrt(np.sum((block[:, None, :] - Y[None, :, :]) ** 2, axis=-1))
        row_mins[start : start + block.shape[0]] = d.min(axis=1)
        if want_cols:
            np.minimum(col_mins, d.min(axis=0), out=col_mins)
    return row_mins, col_mins


def _check_pair(X, Y):
    X, Y = _points(X), _points(Y)
    if X.shape[0] == 0 or Y.shape[0] == 0:
        raise DimensionError("distance between point sets needs both nonempty")
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(f"point sets disagree in dimension: {X.shape[1]} vs {Y.shape[1]}")
    return X, Y


def gd(X, Y) -> float:
    """Mean distance from each point of X to its nearest point of Y."""
    X, Y = _check_pair(X, Y)
    row_mins, _ = _min_dists(X, Y, want_cols=False)
    # plain left-to-right sum, same as a scalar loop would produce
    return sum(row_mins.tolist()) / X.shape[0]


def igd(X, Y) -> float:
    """Mean distance from each point of Y to its nearest point of X."""
    return gd(Y, X)


def gd_igd(X, Y) -> tuple[float, float]:
    """Both directed means in one pairwise pass; equals (gd(X, Y), igd(X, Y))."""
    X, Y = _check_pair(X, Y)
    row_mins, col_mins = _min_dists(X, Y, want_cols=True)
    return (
        sum(row_mins.tolist()) / X.shape[0],
        sum(col_mins.tolist()) / Y.shape[0],
    )
