"""Benchmark problems, front sample generation, and training/validation splits.

Problems come in two flavors:

* analytic: the Pareto set of every objective subset is known in closed form
  and sampled directly (Schaffer, the MED family);
* brute-force: a large quasi-random feasible pool is evaluated once and face
  fronts are extracted by non-dominated filtering of the pooled objective
  projections (ConstrEx, Osyczka2, Viennet2).

Training sets follow the skeleton scheme: each objective subset J of size k
receives sizes[k-1] points drawn from the front of the J-subproblem, all
subsamples pairwise disjoint and disjoint from the validation set.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    InsufficientFrontError,
)
from .pareto import (
    SampleSet,
    enumerate_faces,
    load_sample,
    nondominated_mask,
    save_sample,
    subsample,
)

log = logging.getLogger("bsf.problems")

POOL_SIZE = 100_000
_POOL_CACHE: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
_FRONT_CACHE: dict[tuple, np.ndarray] = {}


@dataclass(frozen=True)
class ProblemDef:
    """Analytic benchmark definition. Constraints are feasible when g(x) >= 0."""

    name: str
    n_vars: int
    n_objectives: int
    bounds: np.ndarray = field(repr=False)  # (L, 2)
    objectives: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    constraints: tuple[Callable[[np.ndarray], np.ndarray], ...] = field(
        default=(), repr=False
    )
    pareto_mode: str = "brute-force"  # or "analytic"
    # (face, n, rng) -> decision matrix of Pareto-optimal points of the
    # subproblem restricted to `face` (0-based objective indices)
    pareto_set_sampler: Callable | None = field(default=None, repr=False)


@dataclass(frozen=True)
class FileProblem:
    """Stand-in for external data: the whole front is just a sample file."""

    name: str
    sample: SampleSet


def evaluate_objectives(problem: ProblemDef, x):
    """Objective vector(s) and constraint feasibility for decision vector(s)."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[1] != problem.n_vars:
        raise DimensionError(
            f"{problem.name} expects {problem.n_vars} variables, got {X.shape[1]}"
        )
    lo, hi = problem.bounds[:, 0], problem.bounds[:, 1]
    if np.any(X < lo) or np.any(X > hi):
        raise DomainError(f"decision vector outside the bounds of {problem.name}")
    F = problem.objectives(X)
    feasible = np.ones(X.shape[0], dtype=bool)
    for g in problem.constraints:
        feasible &= np.asarray(g(X)) >= 0.0
    if single:
        return F[0], bool(feasible[0])
    return F, feasible


# -- problem definitions ------------------------------------------------------


def _schaffer_objectives(X):
    x = X[:, 0]
    return np.column_stack([x**2, (x - 2.0) ** 2])


def _schaffer_sampler(face, n, rng):
    if face == (0,):
        return np.zeros((1, 1))
    if face == (1,):
        return np.full((1, 1), 2.0)
    return rng.uniform(0.0, 2.0, size=n).reshape(-1, 1)


def _constrex_objectives(X):
    x1, x2 = X[:, 0], X[:, 1]
    return np.column_stack([x1, (1.0 + x2) / x1])


def _osyczka2_objectives(X):
    x1, x2, x3, x4, x5, x6 = (X[:, i] for i in range(6))
    f1 = (
        -25.0 * (x1 - 2.0) ** 2
        - (x2 - 2.0) ** 2
        - (x3 - 1.0) ** 2
        - (x4 - 4.0) ** 2
        - (x5 - 1.0) ** 2
    )
    f2 = np.sum(X**2, axis=1)
    return np.column_stack([f1, f2])


def _viennet2_objectives(X):
    x1, x2 = X[:, 0], X[:, 1]
    f1 = (x1 - 2.0) ** 2 / 2.0 + (x2 + 1.0) ** 2 / 13.0 + 3.0
    f2 = (x1 + x2 - 3.0) ** 2 / 36.0 + (-x1 + x2 + 2.0) ** 2 / 8.0 - 17.0
    f3 = (x1 + 2.0 * x2 - 1.0) ** 2 / 175.0 + (2.0 * x2 - x1) ** 2 / 17.0 - 13.0
    return np.column_stack([f1, f2, f3])


def _med_exponents(m: int) -> np.ndarray:
    return np.exp(2.0 * np.arange(m) / (m - 1) - 1.0)


def _med_objectives(m: int):
    p = _med_exponents(m)
    anchors = np.eye(m)

    def objectives(X):
        d = np.linalg.norm(X[:, None, :] - anchors[None, :, :], axis=2) / math.sqrt(2.0)
        return d**p

    return objectives


def _med_sampler(m: int):
    def sampler(face, n, rng):
        k = len(face)
        if k == 1:
            X = np.zeros((1, m))
            X[0, face[0]] = 1.0
            return X
        t = rng.dirichlet(np.ones(k), size=n)
        X = np.zeros((n, m))
        X[:, list(face)] = t
        return X

    return sampler


def _make_schaffer() -> ProblemDef:
    return ProblemDef(
        name="schaffer",
        n_vars=1,
        n_objectives=2,
        bounds=np.array([[-100000.0, 100000.0]]),
        objectives=_schaffer_objectives,
        pareto_mode="analytic",
        pareto_set_sampler=_schaffer_sampler,
    )


def _make_constrex() -> ProblemDef:
    return ProblemDef(
        name="constrex",
        n_vars=2,
        n_objectives=2,
        bounds=np.array([[0.1, 1.0], [0.0, 5.0]]),
        objectives=_constrex_objectives,
        constraints=(
            lambda X: X[:, 1] + 9.0 * X[:, 0] - 6.0,
            lambda X: -X[:, 1] + 9.0 * X[:, 0] - 1.0,
        ),
    )


def _make_osyczka2() -> ProblemDef:
    return ProblemDef(
        name="osyczka2",
        n_vars=6,
        n_objectives=2,
        bounds=np.array(
            [
                [0.0, 10.0],
                [0.0, 10.0],
                [1.0, 5.0],
                [0.0, 6.0],
                [1.0, 5.0],
                [0.0, 10.0],
            ]
        ),
        objectives=_osyczka2_objectives,
        constraints=(
            lambda X: X[:, 0] + X[:, 1] - 2.0,
            lambda X: 6.0 - X[:, 0] - X[:, 1],
            lambda X: 2.0 - X[:, 1] + X[:, 0],
            lambda X: 2.0 - X[:, 0] + 3.0 * X[:, 1],
            lambda X: 4.0 - (X[:, 2] - 3.0) ** 2 - X[:, 3],
            lambda X: (X[:, 4] - 3.0) ** 2 + X[:, 5] - 4.0,
        ),
    )


def _make_viennet2() -> ProblemDef:
    return ProblemDef(
        name="viennet2",
        n_vars=2,
        n_objectives=3,
        bounds=np.array([[-4.0, 4.0], [-4.0, 4.0]]),
        objectives=_viennet2_objectives,
    )


def make_med(m: int) -> ProblemDef:
    """M-variable, M-objective distance problem whose Pareto set is the
    convex hull of the coordinate unit vectors."""
    if m < 2:
        raise DimensionError("the MED family needs at least two objectives")
    return ProblemDef(
        name=f"med{m}",
        n_vars=m,
        n_objectives=m,
        bounds=np.tile([-5.12, 5.12], (m, 1)),
        objectives=_med_objectives(m),
        pareto_mode="analytic",
        pareto_set_sampler=_med_sampler(m),
    )


_REGISTRY: dict[str, Callable[[], ProblemDef]] = {
    "schaffer": _make_schaffer,
    "constrex": _make_constrex,
    "osyczka2": _make_osyczka2,
    "viennet2": _make_viennet2,
    "med3": lambda: make_med(3),
    "med5": lambda: make_med(5),
}


def problem_names() -> list[str]:
    return sorted(_REGISTRY) + ["medM:<M>", "file:<path>"]


def get_problem(name: str) -> ProblemDef | FileProblem:
    if name in _REGISTRY:
        return _REGISTRY[name]()
    if name.startswith("medM:"):
        return make_med(int(name.split(":", 1)[1]))
    if name.startswith("file:"):
        path = name.split(":", 1)[1]
        return FileProblem(Path(path).stem, load_sample(path))
    raise KeyError(f"unknown problem {name!r}; valid names: {', '.join(problem_names())}")


# -- feasible pools for brute-force fronts ------------------------------------


def _lhs_batch(bounds: np.ndarray, size: int, rng) -> np.ndarray:
    lo, hi = bounds[:, 0], bounds[:, 1]
    cols = []
    for j in range(bounds.shape[0]):
        strata = (rng.permutation(size) + rng.random(size)) / size
        cols.append(lo[j] + strata * (hi[j] - lo[j]))
    return np.column_stack(cols)


def feasible_pool(problem: ProblemDef, size: int = POOL_SIZE, seed: int = 0):
    """Quasi-random feasible decision/objective pool, cached per (name, size, seed)."""
    key = (problem.name, size, seed)
    if key not in _POOL_CACHE:
        rng = np.random.default_rng(seed)
        xs, fs = [], []
        have = 0
        while have < size:
            X = _lhs_batch(problem.bounds, max(size, 1 << 16), rng)
            feasible = np.ones(X.shape[0], dtype=bool)
            for g in problem.constraints:
                feasible &= np.asarray(g(X)) >= 0.0
            X = X[feasible]
            xs.append(X)
            fs.append(problem.objectives(X))
            have += X.shape[0]
        X = np.vstack(xs)[:size]
        F = np.vstack(fs)[:size]
        _POOL_CACHE[key] = (X, F)
        log.info("pool for %s: %d feasible points", problem.name, size)
    return _POOL_CACHE[key]


def _pool_face_front(F: np.ndarray, face, cache_key=None) -> np.ndarray:
    """Pool indices whose projection onto `face` is non-dominated; memoized
    per pool so repeated trials reuse the scan."""
    if cache_key is not None:
        key = cache_key + (tuple(face),)
        if key not in _FRONT_CACHE:
            _FRONT_CACHE[key] = np.flatnonzero(nondominated_mask(F[:, list(face)]))
        return _FRONT_CACHE[key]
    return np.flatnonzero(nondominated_mask(F[:, list(face)]))


# -- front sampling ------------------------------------------------------------


def _analytic_face_sample(problem, face, n, rng, with_solutions):
    """n mutually non-dominated points from the closed-form face front."""
    X = problem.pareto_set_sampler(face, n, rng)
    F = problem.objectives(X)
    for _ in range(20):
        keep = nondominated_mask(F[:, list(face)])
        if keep.all() and X.shape[0] >= n:
            break
        X = X[keep][:n]
        F = F[keep][:n]
        short = n - X.shape[0]
        if short <= 0:
            break
        X_extra = problem.pareto_set_sampler(face, short, rng)
        X = np.vstack([X, X_extra])
        F = np.vstack([F, problem.objectives(X_extra)])
    if X.shape[0] < n:
        raise InsufficientFrontError(
            f"could not draw {n} non-dominated points on face of {problem.name}"
        )
    return SampleSet(F[:n], X[:n] if with_solutions else None)


def generate_front_sample(
    problem: ProblemDef,
    n: int,
    seed: int = 0,
    include_endpoints: bool = False,
    with_solutions: bool = False,
    pool_seed: int = 0,
) -> SampleSet:
    """n mutually non-dominated points from the problem's full Pareto front."""
    if n < 1:
        raise InsufficientFrontError("need at least one point")
    rng = np.random.default_rng(seed)
    m = problem.n_objectives
    full = tuple(range(m))
    parts = []
    remaining = n
    if include_endpoints:
        for j in range(m):
            parts.append(_single_objective_optimum(problem, j, rng, with_solutions, pool_seed))
        remaining = n - m
        if remaining < 0:
            raise InsufficientFrontError(f"n={n} cannot include all {m} endpoints")
    if problem.pareto_mode == "analytic":
        if remaining > 0:
            parts.append(_analytic_face_sample(problem, full, remaining, rng, with_solutions))
    elif remaining > 0:
        X, F = feasible_pool(problem, seed=pool_seed)
        front = _pool_face_front(F, full, cache_key=(problem.name, POOL_SIZE, pool_seed))
        if include_endpoints:
            endpoints = {int(np.argmin(F[:, j])) for j in range(m)}
            front = np.array([i for i in front if i not in endpoints], dtype=int)
        if front.size < remaining:
            raise InsufficientFrontError(
                f"pool front of {problem.name} has {front.size} points, need {remaining}"
            )
        pick = rng.choice(front, size=remaining, replace=False)
        parts.append(SampleSet(F[pick], X[pick] if with_solutions else None))
    return SampleSet.concat(parts) if len(parts) > 1 else parts[0]


def _single_objective_optimum(problem, j, rng, with_solutions, pool_seed=0):
    if problem.pareto_mode == "analytic":
        return _analytic_face_sample(problem, (j,), 1, rng, with_solutions)
    X, F = feasible_pool(problem, seed=pool_seed)
    best = int(np.argmin(F[:, j]))
    return SampleSet(F[[best]], X[[best]] if with_solutions else None)


# -- training/validation splits -------------------------------------------------


def make_training_set(
    problem: ProblemDef | FileProblem,
    sizes: tuple[int, ...],
    seed: int = 0,
    validation_size: int = 1000,
    with_solutions: bool = False,
    pool_seed: int = 0,
):
    """Per-face training subsamples plus a validation set.

    Returns (mapping face -> SampleSet, validation SampleSet). Faces of size k
    receive sizes[k-1] points from the front of the matching subproblem;
    subsamples are pairwise disjoint and disjoint from the validation set.
    """
    if isinstance(problem, FileProblem):
        return _training_from_sample(problem.sample, sizes, seed, validation_size)
    if any(s < 0 for s in sizes) or not sizes or sizes[0] < 1:
        raise InsufficientFrontError("sizes must start with at least one vertex point")
    m = problem.n_objectives
    depth = min(len(sizes), m)
    rng = np.random.default_rng(seed)
    if problem.pareto_mode == "analytic":
        training = {}
        for face in enumerate_faces(m, depth):
            n_face = sizes[len(face) - 1]
            if n_face == 0:
                continue
            if len(face) == 1:
                if n_face != 1:
                    raise InsufficientFrontError(
                        f"{problem.name}: a single-objective front is one point; "
                        f"cannot draw {n_face} distinct vertex samples"
                    )
                training[face] = _analytic_face_sample(problem, face, 1, rng, with_solutions)
            else:
                training[face] = _analytic_face_sample(
                    problem, face, n_face, rng, with_solutions
                )
        validation = _analytic_face_sample(
            problem, tuple(range(m)), validation_size, rng, with_solutions
        )
        return training, validation
    return _training_from_pool(
        problem, sizes, depth, rng, validation_size, with_solutions, pool_seed
    )


def _training_from_pool(problem, sizes, depth, rng, validation_size, with_solutions, pool_seed):
    X, F = feasible_pool(problem, seed=pool_seed)
    cache_key = (problem.name, POOL_SIZE, pool_seed)
    used = np.zeros(F.shape[0], dtype=bool)
    training = {}
    for face in enumerate_faces(problem.n_objectives, depth):
        n_face = sizes[len(face) - 1]
        if n_face == 0:
            continue
        front = _pool_face_front(F, face, cache_key=cache_key)
        candidates = front[~used[front]]
        if candidates.size < n_face:
            raise InsufficientFrontError(
                f"{problem.name}: face {face} front has only {candidates.size} unused points, "
                f"need {n_face}"
            )
        if len(face) == 1:
            order = np.argsort(F[candidates, face[0]], kind="stable")
            pick = candidates[order[:n_face]]
        else:
            pick = rng.choice(candidates, size=n_face, replace=False)
        used[pick] = True
        training[face] = SampleSet(F[pick], X[pick] if with_solutions else None)
    front = _pool_face_front(F, tuple(range(problem.n_objectives)), cache_key=cache_key)
    candidates = front[~used[front]]
    if candidates.size == 0:
        raise InsufficientFrontError(f"{problem.name}: no validation points left")
    size = min(validation_size, candidates.size)
    pick = rng.choice(candidates, size=size, replace=False)
    validation = SampleSet(F[pick], X[pick] if with_solutions else None)
    return training, validation


def _training_from_sample(sample: SampleSet, sizes, seed, validation_size):
    """Skeleton split of an externally supplied front sample."""
    m = sample.m
    depth = min(len(sizes), m)
    rng = np.random.default_rng(seed)
    used = np.zeros(sample.n, dtype=bool)
    training = {}
    for face in enumerate_faces(m, depth):
        n_face = sizes[len(face) - 1]
        if n_face == 0:
            continue
        front = np.flatnonzero(nondominated_mask(sample.objectives[:, list(face)]))
        candidates = front[~used[front]]
        if candidates.size < n_face:
            raise InsufficientFrontError(
                f"face {face}: sample front has only {candidates.size} unused points, "
                f"need {n_face}"
            )
        if len(face) == 1:
            order = np.argsort(sample.objectives[candidates, face[0]], kind="stable")
            pick = candidates[order[:n_face]]
        else:
            pick = rng.choice(candidates, size=n_face, replace=False)
        used[pick] = True
        training[face] = sample.take(pick)
    rest = np.flatnonzero(~used)
    if rest.size == 0:
        raise InsufficientFrontError("no points left for validation")
    if rest.size > validation_size:
        rest = np.sort(rng.choice(rest, size=validation_size, replace=False))
    return training, sample.take(rest)


__all__ = [
    "ProblemDef",
    "FileProblem",
    "evaluate_objectives",
    "feasible_pool",
    "generate_front_sample",
    "get_problem",
    "load_sample",
    "make_med",
    "make_training_set",
    "problem_names",
    "save_sample",
]
