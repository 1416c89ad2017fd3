"""Bezier simplex algebra.

Multi-index combinatorics, multinomial Bernstein monomials, model evaluation
with analytic first and second derivatives, face restriction and degree
elevation. Everything here is pure and immutable; the fitting code treats this
module as its linear-algebra substrate.

A model of degree D over the standard simplex in R^m is determined by one
control point per composition d of D into m nonnegative parts:

    b(t) = sum_d  (D! / (d_1! ... d_m!)) * t_1^d_1 ... t_m^d_m * p_d

Compositions are kept in descending lexicographic order on (d_1, ..., d_m).
That ordering is canonical: serialized model files and least-squares column
order both rely on it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from .errors import (
    BarycentricError,
    DimensionError,
    FaceError,
    InvalidIndexError,
)

# Exact integer multinomials only up to this degree; far beyond practical use.
MAX_EXACT_DEGREE = 20

# |sum(t) - 1| below this is considered exact; up to REPAIR_TOLERANCE the
# vector is renormalized (file-loaded data carries rounding), beyond that it
# is rejected.
SUM_TOLERANCE = 1e-12
REPAIR_TOLERANCE = 1e-9


def multi_indices(m: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All compositions of `degree` into `m` nonnegative parts.

    Returned in descending lexicographic order; length C(degree + m - 1, degree).
    """
    if m < 1:
        raise DimensionError(f"need at least one barycentric coordinate, got m={m}")
    if degree < 0:
        raise InvalidIndexError(f"degree must be nonnegative, got {degree}")
    return _multi_indices(m, degree)


@lru_cache(maxsize=None)
def _multi_indices(m: int, degree: int) -> tuple[tuple[int, ...], ...]:
    if m == 1:
        return ((degree,),)
    out = []
    for head in range(degree, -1, -1):
        for tail in _multi_indices(m - 1, degree - head):
            out.append((head,) + tail)
    return tuple(out)


def multinomial(degree: int, index: tuple[int, ...]) -> int:
    """D! / (d_1! ... d_m!), exact integer arithmetic."""
    if degree > MAX_EXACT_DEGREE:
        raise InvalidIndexError(
            f"degree {degree} exceeds exact-arithmetic limit {MAX_EXACT_DEGREE}"
        )
    if any(d < 0 for d in index):
        raise InvalidIndexError(f"negative entry in multi-index {index}")
    if sum(index) != degree:
        raise InvalidIndexError(f"multi-index {index} does not sum to degree {degree}")
    coef = math.factorial(degree)
    for d in index:
        coef //= math.factorial(d)
    return coef


@lru_cache(maxsize=None)
def _basis_arrays(m: int, degree: int):
    idx = np.array(multi_indices(m, degree), dtype=np.int64).reshape(-1, m)
    w = np.array([multinomial(degree, tuple(d)) for d in idx], dtype=float)
    return idx, w


def weighted_design_matrix(m: int, degree: int, T: np.ndarray) -> np.ndarray:
    """Rows: evaluation points; columns: multinomial-weighted monomials.

    Column order follows multi_indices(m, degree). Entry [n, k] is the
    coefficient of control point k in b(T[n]).
    """
    T = np.asarray(T, dtype=float)
    idx, w = _basis_arrays(m, degree)
    mono = np.prod(T[:, None, :] ** idx[None, :, :], axis=2)
    return w * mono


def as_barycentric(t, m: int | None = None) -> np.ndarray:
    """Validate and repair a single barycentric vector.

    Entries below -1e-9 or a coordinate sum further than 1e-9 from 1 are
    rejected; anything closer is clipped/renormalized onto the simplex.
    """
    return as_barycentric_rows(np.asarray(t, dtype=float).reshape(1, -1), m)[0]


def as_barycentric_rows(T, m: int | None = None) -> np.ndarray:
    """Row-wise version of as_barycentric for (n, m) arrays."""
    arr = np.array(T, dtype=float, copy=True)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d array of coordinates, got shape {arr.shape}")
    if m is not None and arr.shape[1] != m:
        raise DimensionError(f"expected {m} barycentric coordinates, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise BarycentricError("non-finite barycentric coordinates")
    if np.any(arr < -REPAIR_TOLERANCE):
        raise BarycentricError("negative barycentric coordinate beyond repair tolerance")
    sums = arr.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > REPAIR_TOLERANCE):
        raise BarycentricError("coordinates do not sum to 1 within repair tolerance")
    np.maximum(arr, 0.0, out=arr)
    sums = arr.sum(axis=1)
    off = sums != 1.0
    if np.any(off):
        arr[off] /= sums[off, None]
    return arr


def embed_on_face(s, face: tuple[int, ...], m: int) -> np.ndarray:
    """Zero-pad barycentric coordinates of a face back into m coordinates."""
    s = np.asarray(s, dtype=float)
    out = np.zeros(s.shape[:-1] + (m,))
    out[..., list(face)] = s
    return out


def _check_face(face, m: int) -> tuple[int, ...]:
    face = tuple(sorted(set(int(j) for j in face)))
    if not face:
        raise FaceError("face must contain at least one objective index")
    if face[0] < 0 or face[-1] >= m:
        raise FaceError(f"face {face} out of range for m={m}")
    return face


def face_indices(m: int, degree: int, face) -> tuple[tuple, tuple]:
    """Split the index set of a face into (all, interior).

    `all` holds the multi-indices supported inside the face; `interior` those
    whose support is exactly the face (not shared with any proper subface).
    """
    face = _check_face(face, m)
    fset = set(face)
    all_idx, interior = [], []
    for d in multi_indices(m, degree):
        support = {i for i, di in enumerate(d) if di > 0}
        if support <= fset:
            all_idx.append(d)
            if support == fset:
                interior.append(d)
    return tuple(all_idx), tuple(interior)


@dataclass(frozen=True, eq=False)
class BezierSimplex:
    """Polynomial map from the standard simplex in R^m to R^ambient.

    `points` has one row per canonical multi-index; row order is the
    descending lexicographic order of multi_indices(m, degree).
    """

    m: int
    degree: int
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise DimensionError(f"need at least one barycentric coordinate, got m={self.m}")
        if self.degree < 0:
            raise InvalidIndexError(f"degree must be nonnegative, got {self.degree}")
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 2:
            raise DimensionError(f"control points must be a 2-d array, got shape {pts.shape}")
        expected = len(multi_indices(self.m, self.degree))
        if pts.shape[0] != expected:
            raise DimensionError(
                f"expected {expected} control points for m={self.m}, degree={self.degree}, "
                f"got {pts.shape[0]}"
            )
        if pts.shape[1] < 1:
            raise DimensionError("ambient dimension must be at least 1")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def ambient(self) -> int:
        return self.points.shape[1]

    @cached_property
    def indices(self) -> tuple[tuple[int, ...], ...]:
        return multi_indices(self.m, self.degree)

    @cached_property
    def _rows(self) -> dict[tuple[int, ...], int]:
        return {d: i for i, d in enumerate(self.indices)}

    def index_row(self, index) -> int:
        try:
            return self._rows[tuple(index)]
        except KeyError:
            raise InvalidIndexError(
                f"{tuple(index)} is not a degree-{self.degree} index over {self.m} coordinates"
            ) from None

    def control_point(self, index) -> np.ndarray:
        return self.points[self.index_row(index)]

    def with_points(self, points) -> "BezierSimplex":
        return BezierSimplex(self.m, self.degree, points)

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, t) -> np.ndarray:
        t = as_barycentric(t, self.m)
        return weighted_design_matrix(self.m, self.degree, t[None, :])[0] @ self.points

    def evaluate_batch(self, T) -> np.ndarray:
        T = as_barycentric_rows(T, self.m)
        return weighted_design_matrix(self.m, self.degree, T) @ self.points

    def gradient(self, t) -> np.ndarray:
        """Partial derivatives as an (ambient, m) matrix; column j is d b / d t_j.

        Coordinates are treated as independent variables; the simplex
        constraint is the caller's concern.
        """
        t = as_barycentric(t, self.m)
        basis = _derivative_basis(self.m, self.degree)
        pt = _power_table(t, self.degree)
        mono = np.prod(pt[basis.grad_exp, basis.cols], axis=-1)  # (m, K)
        return ((basis.grad_coef * mono) @ self.points).T

    def hessian(self, t) -> np.ndarray:
        """Second partials as an (ambient, m, m) tensor, symmetric in the last two axes."""
        t = as_barycentric(t, self.m)
        basis = _derivative_basis(self.m, self.degree)
        pt = _power_table(t, self.degree)
        mono = np.prod(pt[basis.hess_exp, basis.cols], axis=-1)  # (m, m, K)
        return np.einsum("ijk,ka->aij", basis.hess_coef * mono, self.points)

    # -- structure ----------------------------------------------------------

    def restrict(self, face) -> "BezierSimplex":
        """Sub-model over the face's own simplex; agrees with the parent on it."""
        face = _check_face(face, self.m)
        sub_idx = multi_indices(len(face), self.degree)
        rows = [self.index_row(embed_index(d, face, self.m)) for d in sub_idx]
        return BezierSimplex(len(face), self.degree, self.points[rows])

    def elevate(self) -> "BezierSimplex":
        """Equivalent model of degree + 1 (exact re-expression, same map)."""
        new_degree = self.degree + 1
        new_idx = multi_indices(self.m, new_degree)
        pts = np.zeros((len(new_idx), self.ambient))
        for r, e in enumerate(new_idx):
            for j, ej in enumerate(e):
                if ej > 0:
                    lower = e[:j] + (ej - 1,) + e[j + 1:]
                    pts[r] += (ej / new_degree) * self.points[self.index_row(lower)]
        return BezierSimplex(self.m, new_degree, pts)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "M": self.m,
            "D": self.degree,
            "A": self.ambient,
            "control_points": [
                {"index": list(d), "point": [float(v) for v in p]}
                for d, p in zip(self.indices, self.points)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BezierSimplex":
        m, degree, ambient = int(data["M"]), int(data["D"]), int(data["A"])
        entries = {tuple(e["index"]): e["point"] for e in data["control_points"]}
        idx = multi_indices(m, degree)
        if set(entries) != set(idx):
            raise InvalidIndexError("control point index set is incomplete or has extras")
        pts = np.array([entries[d] for d in idx], dtype=float)
        if pts.shape[1] != ambient:
            raise DimensionError(f"points have dimension {pts.shape[1]}, header says {ambient}")
        return cls(m, degree, pts)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "BezierSimplex":
        return cls.from_dict(json.loads(Path(path).read_text()))


def embed_index(d: tuple[int, ...], face: tuple[int, ...], m: int) -> tuple[int, ...]:
    """Place a face-local multi-index into m coordinates, zeros elsewhere."""
    out = [0] * m
    for value, j in zip(d, face):
        out[j] = value
    return tuple(out)


def _power_table(t: np.ndarray, degree: int) -> np.ndarray:
    # pt[e, j] = t_j ** e for e = 0..degree; 0**0 == 1 covers boundary points.
    return t[None, :] ** np.arange(degree + 1)[:, None]


@lru_cache(maxsize=None)
def _derivative_basis(m: int, degree: int) -> SimpleNamespace:
    """Exponent/coefficient tables for analytic derivatives, fixed per (m, degree).

    Exponents are clipped at zero where the matching coefficient vanishes, so
    the gathered monomial is harmless.
    """
    idx, w = _basis_arrays(m, degree)
    eye = np.eye(m, dtype=np.int64)
    grad_exp = np.maximum(idx[None, :, :] - eye[:, None, :], 0)  # (m, K, m)
    grad_coef = w[None, :] * idx.T  # (m, K): w_k * d_kj
    hess_exp = np.maximum(
        idx[None, None, :, :] - eye[:, None, None, :] - eye[None, :, None, :], 0
    )  # (m, m, K, m)
    dj_minus = idx.T[None, :, :] - eye[:, :, None]  # (m, m, K): d_kj - delta_ij
    hess_coef = w[None, None, :] * idx.T[:, None, :] * dj_minus
    return SimpleNamespace(
        idx=idx,
        w=w,
        cols=np.arange(m),
        grad_exp=grad_exp,
        grad_coef=grad_coef,
        hess_exp=hess_exp,
        hess_coef=hess_coef,
    )
