"""Model fitting by alternating foot-point projection and linear least squares.

Two fitting strategies share one alternating loop:

* all-at-once: every control point is free, the whole sample is used;
* inductive skeleton: faces are fitted in ascending cardinality, control
  points of already-fitted subfaces are frozen, and only the face-interior
  control points are solved against that face's subsample.

The parameter update is a constrained Newton iteration on the squared
distance, with the last barycentric coordinate eliminated and iterates
clamped back onto the simplex. The control-point update is an exact linear
least-squares solve, so the per-iteration loss never increases.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .bezier import (
    BezierSimplex,
    _derivative_basis,
    _power_table,
    as_barycentric,
    face_indices,
    multi_indices,
    weighted_design_matrix,
)
from .errors import DimensionError, InsufficientDataError
from .pareto import SampleSet, enumerate_faces

log = logging.getLogger("bsf.fitting")


@dataclass(frozen=True)
class FitConfig:
    degree: int = 3
    max_outer_iters: int = 100
    max_newton_iters: int = 100
    newton_tol: float = 1e-5
    outer_tol: float = 1e-5
    init_grid_resolution: int = 10

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.max_outer_iters < 1 or self.max_newton_iters < 1:
            raise ValueError("iteration caps must be at least 1")
        if self.newton_tol <= 0 or self.outer_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.init_grid_resolution < 1:
            raise ValueError("init grid resolution must be at least 1")


@dataclass(frozen=True)
class FaceReport:
    iterations: int
    ssr: float
    n_points: int
    free_points: int
    warning: str | None = None


@dataclass(frozen=True, eq=False)
class FitResult:
    """Fitted model plus convergence record.

    `parameters` holds the final per-sample barycentric parameters for the
    all-at-once fit and is None for the skeleton fit, whose samples live on
    faces; per-face details go to `per_face_report`. For the skeleton fit
    `outer_iterations` is the maximum over faces and `ssr_trace` is the trace
    of the last face fitted.
    """

    model: BezierSimplex
    parameters: np.ndarray | None
    ssr_trace: tuple[float, ...]
    outer_iterations: int
    per_face_report: dict[tuple[int, ...], FaceReport] | None = None

    def sidecar_dict(self) -> dict:
        report = None
        if self.per_face_report is not None:
            report = {
                "-".join(str(j + 1) for j in face): {
                    "iterations": r.iterations,
                    "ssr": r.ssr,
                    "n_points": r.n_points,
                    "free_points": r.free_points,
                    "warning": r.warning,
                }
                for face, r in self.per_face_report.items()
            }
        return {
            "ssr_trace": [float(v) for v in self.ssr_trace],
            "outer_iterations": self.outer_iterations,
            "per_face_report": report,
            "parameters": None
            if self.parameters is None
            else [[float(v) for v in row] for row in self.parameters],
        }


def initialize_control_net(vertex_optima, degree: int, m: int | None = None) -> BezierSimplex:
    """Control net on the simplex grid spanned by the given corner points.

    Corner indices get the corners themselves; index d gets the barycentric
    combination sum_j (d_j / degree) * corner_j.
    """
    V = np.atleast_2d(np.asarray(vertex_optima, dtype=float))
    if m is not None and V.shape[0] != m:
        raise DimensionError(f"expected {m} corner points, got {V.shape[0]}")
    m = V.shape[0]
    idx = np.array(multi_indices(m, degree), dtype=float)
    if degree == 0:
        pts = V.mean(axis=0, keepdims=True)
    else:
        pts = (idx / degree) @ V
    return BezierSimplex(m, degree, pts)


def barycentric_grid(m: int, resolution: int) -> np.ndarray:
    """All barycentric vectors with denominator `resolution`; canonical order."""
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    idx = np.array(multi_indices(m, resolution), dtype=float)
    return idx / resolution


def init_parameters(model: BezierSimplex, X, cfg: FitConfig) -> np.ndarray:
    """Per-point starting parameters: argmin of the squared distance over a
    coarse barycentric grid (first hit wins on ties)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    grid = barycentric_grid(model.m, cfg.init_grid_resolution)
    values = model.evaluate_batch(grid)  # (G, A)
    diffs = X[:, None, :] - values[None, :, :]
    best = np.argmin(np.einsum("ngk,ngk->ng", diffs, diffs), axis=1)
    return grid[best]


def _evaluate_raw(basis, points, t):
    pt = _power_table(t, int(basis.idx.sum(axis=1).max(initial=0)))
    mono = np.prod(pt[basis.idx, basis.cols], axis=-1)
    return (basis.w * mono) @ points


def _value_jac_hess(basis, points, degree, t):
    pt = _power_table(t, degree)
    mono = np.prod(pt[basis.idx, basis.cols], axis=-1)
    b = (basis.w * mono) @ points
    mg = np.prod(pt[basis.grad_exp, basis.cols], axis=-1)
    jac = ((basis.grad_coef * mg) @ points).T  # (A, m)
    mh = np.prod(pt[basis.hess_exp, basis.cols], axis=-1)
    hess = np.einsum("ijk,ka->aij", basis.hess_coef * mh, points)  # (A, m, m)
    return b, jac, hess


def _clamp_renorm(t: np.ndarray) -> np.ndarray | None:
    t = np.maximum(t, 0.0)
    s = t.sum()
    if s <= 0.0:
        return None
    return t / s if s != 1.0 else t


def project_parameter(model: BezierSimplex, x, t0, cfg: FitConfig) -> np.ndarray:
    """Foot-point projection: locally minimize |b(t) - x|^2 over the simplex.

    Newton steps act on the reduced coordinates (the last one is eliminated
    through the sum constraint); after each step negative entries are clamped
    to zero and the vector renormalized. Iteration stops when the full
    orthogonality residual sqrt(sum_j <d b/d t_j, b(t) - x>^2) drops below
    cfg.newton_tol, at the iteration cap, or once the iterate stalls (a step
    below 1e-15, or five consecutive steps without improving the best squared
    distance; clamped boundary minima never satisfy the residual test). A
    singular or non-finite Newton system falls back to a backtracking gradient
    step (at most 20 halvings). The best iterate by squared distance is
    returned, so the result never falls behind the start.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (model.ambient,):
        raise DimensionError(f"expected a point in R^{model.ambient}, got shape {x.shape}")
    t = as_barycentric(t0, model.m)
    if model.m == 1:
        return t
    basis = _derivative_basis(model.m, model.degree)
    P = model.points

    def squared_distance(tv):
        r = _evaluate_raw(basis, P, tv) - x
        return float(r @ r)

    best_t, best_g = t, squared_distance(t)
    stalled = 0
    for _ in range(cfg.max_newton_iters):
        b, jac, hess = _value_jac_hess(basis, P, model.degree, t)
        r = b - x
        resid = jac.T @ r
        if math.sqrt(float(resid @ resid)) <= cfg.newton_tol:
            break
        g_now = float(r @ r)
        grad = 2.0 * resid
        hg = 2.0 * (jac.T @ jac + np.tensordot(r, hess, axes=(0, 0)))
        gu = grad[:-1] - grad[-1]
        hu = hg[:-1, :-1] - hg[:-1, -1:] - hg[-1:, :-1] + hg[-1, -1]
        t_new = None
        try:
            step = np.linalg.solve(hu, -gu)
            if np.all(np.isfinite(step)):
                t_new = _clamp_renorm(t + np.append(step, -step.sum()))
        except np.linalg.LinAlgError:
            t_new = None
        if t_new is None:
            # damped gradient fallback keeps the iteration total
            direction = np.append(-gu, gu.sum())
            alpha = 1.0
            for _ in range(20):
                cand = _clamp_renorm(t + alpha * direction)
                if cand is not None and squared_distance(cand) < g_now:
                    t_new = cand
                    break
                alpha *= 0.5
        if t_new is None or np.max(np.abs(t_new - t)) <= 1e-15:
            break  # fixed point (typically a clamped boundary minimum)
        t = t_new
        g = squared_distance(t)
        if g < best_g:
            best_t, best_g = t, g
            stalled = 0
        else:
            stalled += 1
            if stalled >= 5:
                break
    return best_t


def solve_control_points(X, T, model: BezierSimplex, free) -> BezierSimplex:
    """Least-squares update of the free control points, all others held fixed.

    The unknowns are offsets from the current values; rank-deficient systems
    take the minimum-norm offset, which leaves undetermined directions at
    their current (grid-initialized) values rather than shrinking them to zero.
    """
    free = {tuple(d) for d in free}
    if not free:
        return model
    rows = [i for i, d in enumerate(model.indices) if d in free]
    if len(rows) != len(free):
        unknown = free - set(model.indices)
        raise DimensionError(f"free indices not in the model: {sorted(unknown)}")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 0:
        raise InsufficientDataError("no sample points for a control-point solve")
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if X.shape[0] != T.shape[0]:
        raise DimensionError("samples and parameters disagree in count")
    phi = weighted_design_matrix(model.m, model.degree, T)
    residual = X - phi @ model.points
    delta, *_ = np.linalg.lstsq(phi[:, rows], residual, rcond=None)
    pts = model.points.copy()
    pts[rows] += delta
    return model.with_points(pts)


def sse(model: BezierSimplex, X, T) -> float:
    """Sum of squared residuals of the sample against the parameterized model."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if X.shape[0] != T.shape[0]:
        raise DimensionError("samples and parameters disagree in count")
    r = model.evaluate_batch(T) - X
    return float(np.sum(r * r))


def _alternate(model, X, cfg, free):
    """Shared alternating loop: project all parameters, then solve the free
    control points; stop when the per-point improvement of sqrt(SSR) falls
    below cfg.outer_tol or the iteration cap is reached."""
    n = X.shape[0]
    T = init_parameters(model, X, cfg)
    trace = [sse(model, X, T)]
    iterations = 0
    for _ in range(cfg.max_outer_iters):
        T = np.vstack([project_parameter(model, x, t, cfg) for x, t in zip(X, T)])
        model = solve_control_points(X, T, model, free)
        current = sse(model, X, T)
        previous = trace[-1]
        trace.append(current)
        iterations += 1
        if (math.sqrt(previous) - math.sqrt(current)) / n <= cfg.outer_tol:
            break
    return model, T, trace, iterations


def fit_all_at_once(S: SampleSet, vertex_optima, cfg: FitConfig) -> FitResult:
    """Alternating fit of every control point against the whole sample."""
    X = S.ambient()
    if X.shape[0] < 1:
        raise InsufficientDataError("need at least one sample point")
    model = initialize_control_net(vertex_optima, cfg.degree, m=S.m)
    if model.ambient != X.shape[1]:
        raise DimensionError(
            f"corner points live in R^{model.ambient} but samples in R^{X.shape[1]}"
        )
    model, T, trace, iterations = _alternate(model, X, cfg, set(model.indices))
    log.info("all-at-once fit: %d outer iterations, SSR %.3e", iterations, trace[-1])
    return FitResult(model, T, tuple(trace), iterations)


def fit_inductive_skeleton(
    decomposed: dict[tuple[int, ...], SampleSet], vertex_optima, cfg: FitConfig
) -> FitResult:
    """Fit faces in ascending cardinality, freezing subface control points.

    For each face the alternating loop runs on the face's own sub-model with
    only the face-interior control points free, against that face's
    subsample. Missing or empty subsamples for a vertex raise; for larger
    faces the interior points keep their grid initialization and a warning is
    recorded in the per-face report.
    """
    V = np.atleast_2d(np.asarray(vertex_optima, dtype=float))
    m = V.shape[0]
    model = initialize_control_net(V, cfg.degree)
    report: dict[tuple[int, ...], FaceReport] = {}
    last_trace = [0.0]
    max_iters = 0
    for face in enumerate_faces(m, min(cfg.degree, m) if cfg.degree >= 1 else 1):
        _, interior = face_indices(m, cfg.degree, face)
        if not interior:
            continue
        S_face = decomposed.get(face)
        n_points = 0 if S_face is None else S_face.n
        if n_points == 0:
            label = "-".join(str(j + 1) for j in face)
            if len(face) == 1:
                raise InsufficientDataError(f"no sample for vertex face {label}")
            log.warning("face %s has no subsample; keeping grid initialization", label)
            report[face] = FaceReport(0, float("nan"), 0, len(interior), "empty subsample")
            continue
        X = S_face.ambient()
        if X.shape[1] != model.ambient:
            raise DimensionError(
                f"face sample lives in R^{X.shape[1]}, model in R^{model.ambient}"
            )
        sub = model.restrict(face)
        free_sub = {tuple(d[j] for j in face) for d in interior}
        sub, _, trace, iterations = _alternate(sub, X, cfg, free_sub)
        pts = model.points.copy()
        for d in interior:
            sub_row = sub.index_row(tuple(d[j] for j in face))
            pts[model.index_row(d)] = sub.points[sub_row]
        model = model.with_points(pts)
        report[face] = FaceReport(iterations, trace[-1], n_points, len(interior))
        last_trace = trace
        max_iters = max(max_iters, iterations)
    log.info("skeleton fit: %d faces, max %d outer iterations", len(report), max_iters)
    return FitResult(model, None, tuple(last_trace), max_iters, report)
