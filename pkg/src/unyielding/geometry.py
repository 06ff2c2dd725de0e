"""Bilinear forms, wedge products and squared simplex volumes.

Everything here is metric-agnostic: Euclidean space ``R^n``, the unit sphere
``S^n`` inside ``R^(n+1)`` and the hyperboloid ``H^n`` inside Minkowski space
``R^(n,1)`` (time coordinate first) share one code path that differs only in
the diagonal of the bilinear form.

Point indices are 0-based throughout.  Squared volumes use the
chord-determinant form::

    det( (l_{0a}^2 + l_{0b}^2 - l_{ab}^2) / 2 )_{1 <= a, b <= k}

which equals ``(k!)^2 V_k^2`` for a Euclidean k-simplex and is built from the
same chord-squared values in the curved models.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ValidationError

SURFACE_TOL = 1e-9
ZERO_TOL = 1e-9
FD_STEP = 1e-5


class Space(str, Enum):
    EUCLIDEAN = "euclidean"
    SPHERICAL = "spherical"
    HYPERBOLIC = "hyperbolic"

    @classmethod
    def parse(cls, name) -> "Space":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"e": cls.EUCLIDEAN, "r": cls.EUCLIDEAN, "s": cls.SPHERICAL, "h": cls.HYPERBOLIC}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValidationError(f"unknown space {name!r}") from None


@dataclass(frozen=True)
class MetricSignature:
    """Which model space a configuration lives in, and its intrinsic dimension."""

    space: Space
    n: int

    def __post_init__(self):
        object.__setattr__(self, "space", Space.parse(self.space))
        if int(self.n) < 1:
            raise ValidationError("dimension must be >= 1")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def euclidean(cls, n):
        return cls(Space.EUCLIDEAN, n)

    @classmethod
    def spherical(cls, n):
        return cls(Space.SPHERICAL, n)

    @classmethod
    def hyperbolic(cls, n):
        return cls(Space.HYPERBOLIC, n)

    @property
    def curved(self) -> bool:
        return self.space is not Space.EUCLIDEAN

    @property
    def ambient_dim(self) -> int:
        return self.n + 1 if self.curved else self.n

    @property
    def curvature(self) -> int:
        return {Space.EUCLIDEAN: 0, Space.SPHERICAL: 1, Space.HYPERBOLIC: -1}[self.space]

    @property
    def weights(self) -> np.ndarray:
        w = np.ones(self.ambient_dim)
        if self.space is Space.HYPERBOLIC:
            w[0] = -1.0
        return w

    @property
    def self_product(self) -> float:
        """``X . X`` for a point on the model surface (curved metrics only)."""
        return float(self.curvature)

    def lifted(self, extra: int = 1) -> "MetricSignature":
        return MetricSignature(self.space, self.n + extra)


def _as_metric(metric) -> MetricSignature:
    if isinstance(metric, MetricSignature):
        return metric
    if isinstance(metric, PointConfiguration):
        return metric.metric
    raise TypeError(f"expected MetricSignature, got {type(metric).__name__}")


def bilinear_dot(u, v, metric) -> float:
    """Euclidean dot product, or the Minkowski product ``-u0 v0 + sum u_i v_i``."""
    metric = _as_metric(metric)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d = metric.ambient_dim
    if u.shape != (d,) or v.shape != (d,):
        raise DimensionMismatch(f"vectors must have {d} components, got {u.shape} and {v.shape}")
    return float(np.dot(u * metric.weights, v))


def gram(rows_a, rows_b, metric) -> np.ndarray:
    """Matrix of pairwise bilinear products between two stacks of vectors."""
    metric = _as_metric(metric)
    a = np.atleast_2d(np.asarray(rows_a, dtype=float))
    b = np.atleast_2d(np.asarray(rows_b, dtype=float))
    d = metric.ambient_dim
    if a.shape[1] != d or b.shape[1] != d:
        raise DimensionMismatch(f"vectors must have {d} components")
    return (a * metric.weights) @ b.T


def wedge_inner(base_rows: Sequence, other_rows: Sequence, metric) -> float:
    """``(r_1 ^ ... ^ r_k) . (s_1 ^ ... ^ s_k) = det(r_i . s_j)``.

    The empty wedge (k = 0) is the scalar 1.
    """
    if len(base_rows) != len(other_rows):
        raise DimensionMismatch(
            f"wedge_inner needs equal lengths, got {len(base_rows)} and {len(other_rows)}"
        )
    if len(base_rows) == 0:
        return 1.0
    return float(np.linalg.det(gram(base_rows, other_rows, metric)))


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """An ordered list of points in one of the three model spaces.

    Curved points are checked against the model surface and re-projected
    along their ray when the residual is within ``surface_tol``; anything
    further away is rejected.
    """

    metric: MetricSignature
    points: np.ndarray
    labels: tuple = field(default=())
    surface_tol: float = SURFACE_TOL

    def __post_init__(self):
        metric = _as_metric(self.metric)
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2:
            raise DimensionMismatch("points must be a 2-d array (one row per point)")
        if pts.shape[0] < 2:
            raise ValidationError("a configuration needs at least two points")
        if pts.shape[1] != metric.ambient_dim:
            raise DimensionMismatch(
                f"{metric.space.value} dimension {metric.n} needs {metric.ambient_dim} "
                f"coordinates per point, got {pts.shape[1]}"
            )
        if not np.all(np.isfinite(pts)):
            raise ValidationError("coordinates must be finite")
        if metric.curved:
            pts = _validated_surface_points(pts, metric, self.surface_tol)
        pts.setflags(write=False)
        labels = tuple(self.labels) if self.labels else tuple(f"A{i + 1}" for i in range(len(pts)))
        if len(labels) != len(pts):
            raise ValidationError("labels must match the number of points")
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def space(self) -> Space:
        return self.metric.space

    def __len__(self):
        return self.m

    def __getitem__(self, i):
        return self.points[i]

    def with_points(self, points) -> "PointConfiguration":
        return PointConfiguration(self.metric, points, self.labels, self.surface_tol)

    def subset(self, indices) -> "PointConfiguration":
        idx = list(indices)
        return PointConfiguration(self.metric, self.points[idx], tuple(self.labels[i] for i in idx))

    def lifted(self, extra: int = 1) -> "PointConfiguration":
        """Embed into the model space of dimension ``n + extra`` by padding zeros."""
        pts = np.hstack([self.points, np.zeros((self.m, extra))])
        return PointConfiguration(self.metric.lifted(extra), pts, self.labels)

    def scale(self) -> float:
        """Largest chord length, used to make tolerances scale-free."""
        c = chord_matrix(self)
        return float(math.sqrt(max(c.max(), 0.0))) or 1.0

    @classmethod
    def from_polar(cls, metric, base, tangents, labels=()):
        """Build curved points by exponentiating tangent vectors at ``base``."""
        metric = _as_metric(metric)
        base = project_to_surface(base, metric)
        pts = [exp_map(base, tangent_component(base, t, metric), metric) for t in tangents]
        return cls(metric, np.array(pts), labels)


def _validated_surface_points(pts, metric, tol):
    w = metric.weights
    q = np.einsum("ij,j,ij->i", pts, w, pts)
    target = metric.self_product
    scale = np.maximum(1.0, np.einsum("ij,ij->i", pts, pts))
    bad = np.abs(q - target) > tol * scale
    if metric.space is Space.HYPERBOLIC:
        bad |= pts[:, 0] <= 0
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ValidationError(
            f"point {i + 1} is not on the {metric.space.value} model surface "
            f"(residual {q[i] - target:.3g})"
        )
    return pts / np.sqrt(np.abs(q))[:, None]


def project_to_surface(x, metric) -> np.ndarray:
    """Rescale a vector along its ray onto the model surface."""
    metric = _as_metric(metric)
    x = np.asarray(x, dtype=float)
    if not metric.curved:
        return x.copy()
    q = bilinear_dot(x, x, metric)
    if metric.space is Space.SPHERICAL:
        if q <= 0:
            raise ValidationError("cannot project the zero vector onto the sphere")
        return x / math.sqrt(q)
    if q >= 0:
        raise ValidationError("vector is not timelike; no ray meets the hyperboloid")
    y = x / math.sqrt(-q)
    return y if y[0] > 0 else -y


def tangent_component(point, v, metric) -> np.ndarray:
    """Part of ``v`` tangent to the model surface at ``point``."""
    metric = _as_metric(metric)
    v = np.asarray(v, dtype=float)
    if not metric.curved:
        return v.copy()
    p = np.asarray(point, dtype=float)
    return v - bilinear_dot(v, p, metric) / metric.self_product * p


def exp_map(base, tangent, metric) -> np.ndarray:
    metric = _as_metric(metric)
    base = np.asarray(base, dtype=float)
    tangent = np.asarray(tangent, dtype=float)
    if not metric.curved:
        return base + tangent
    r2 = bilinear_dot(tangent, tangent, metric)
    r = math.sqrt(max(r2, 0.0))
    if r == 0.0:
        return base.copy()
    if metric.space is Space.SPHERICAL:
        out = math.cos(r) * base + math.sin(r) / r * tangent
    else:
        out = math.cosh(r) * base + math.sinh(r) / r * tangent
    return project_to_surface(out, metric)


def chord_squared(a, b, metric) -> float:
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return bilinear_dot(d, d, metric)


def chord_matrix(config: PointConfiguration) -> np.ndarray:
    """Symmetric matrix of chord-squared values with an exact zero diagonal."""
    p = config.points
    g = (p * config.metric.weights) @ p.T
    diag = np.diag(g)
    c = diag[:, None] + diag[None, :] - 2.0 * g
    c = 0.5 * (c + c.T)
    np.fill_diagonal(c, 0.0)
    return c


def _check_indices(indices, m):
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ValidationError(f"duplicate vertex indices {idx}")
    for i in idx:
        if not 0 <= i < m:
            raise ValidationError(f"vertex index {i} out of range for {m} points")
    return idx


def chord_determinant(chords: np.ndarray) -> float:
    """Squared volume from a (k+1)x(k+1) chord-squared matrix."""
    k = chords.shape[0] - 1
    if k == 0:
        return 1.0
    l0 = chords[0, 1:]
    mat = 0.5 * (l0[:, None] + l0[None, :] - chords[1:, 1:])
    return float(np.linalg.det(mat))


def squared_simplex_volume(indices, config: PointConfiguration) -> float:
    """``(P_1...P_{k+1})^2`` via the chord determinant; ``(k!)^2 V_k^2`` in R^n."""
    idx = _check_indices(indices, config.m)
    c = chord_matrix(config)
    return chord_determinant(c[np.ix_(idx, idx)])


def displacement_volume(indices, config: PointConfiguration) -> float:
    """Same quantity as :func:`squared_simplex_volume`, from coordinate displacements."""
    idx = _check_indices(indices, config.m)
    p = config.points
    rows = [p[i] - p[idx[0]] for i in idx[1:]]
    return wedge_inner(rows, rows, config.metric)


def o_prefixed_square(indices, config: PointConfiguration) -> float:
    """``(O P_1 ... P_{k+1})^2``: Gram determinant of the position vectors.

    In ``H^n`` this is negative for independent points (one timelike direction).
    """
    if not config.metric.curved:
        raise ValidationError("O-prefixed wedge products are only defined for curved metrics")
    idx = _check_indices(indices, config.m)
    rows = config.points[idx]
    return wedge_inner(rows, rows, config.metric)


def o_prefixed_norm(indices, config: PointConfiguration) -> float:
    return math.sqrt(abs(o_prefixed_square(indices, config)))


def volume_gradient_edge(indices, i, j, config: PointConfiguration) -> float:
    """Partial derivative of the squared volume with respect to the (i, j) chord-squared.

    Equals the inner product of the two (k-1)-vectors obtained by dropping
    ``P_i`` (resp. ``P_j``) and basing the remaining vertices at it.
    """
    idx = _check_indices(indices, config.m)
    if i == j or i not in idx or j not in idx:
        raise ValidationError(f"edge ({i}, {j}) is not an edge of simplex {idx}")
    rest = [r for r in idx if r not in (i, j)]
    p = config.points
    rows_i = [p[r] - p[i] for r in rest]
    rows_j = [p[r] - p[j] for r in rest]
    return wedge_inner(rows_i, rows_j, config.metric)


def chord_from_geodesic(d, metric) -> float:
    metric = _as_metric(metric)
    d = float(d)
    if d < 0:
        raise ValidationError("geodesic distance must be non-negative")
    if metric.space is Space.EUCLIDEAN:
        return d * d
    if metric.space is Space.SPHERICAL:
        return 4.0 * math.sin(0.5 * d) ** 2
    return 4.0 * math.sinh(0.5 * d) ** 2


def geodesic_from_chord(c, metric) -> float:
    metric = _as_metric(metric)
    c = float(c)
    if c < 0:
        if c < -1e-12:
            raise ValidationError(f"chord-squared must be non-negative, got {c}")
        c = 0.0
    if metric.space is Space.EUCLIDEAN:
        return math.sqrt(c)
    if metric.space is Space.SPHERICAL:
        if c >= 4.0:
            raise ValidationError("spherical chord-squared must lie in [0, 4)")
        return 2.0 * math.asin(0.5 * math.sqrt(c))
    return 2.0 * math.asinh(0.5 * math.sqrt(c))


def chord_rate(d, metric) -> float:
    """``d(chord^2)/d(geodesic)``; equals ``2 |OAB|`` in the curved models."""
    metric = _as_metric(metric)
    if metric.space is Space.EUCLIDEAN:
        return 2.0 * d
    if metric.space is Space.SPHERICAL:
        return 2.0 * math.sin(d)
    return 2.0 * math.sinh(d)


def negligible(value, scale, k=1, tol=ZERO_TOL) -> bool:
    """Scale-aware zero test: ``|value| < tol * scale**k``."""
    return abs(value) < tol * abs(scale) ** k


def faces(m: int, k: int):
    """All k-faces of an (m-1)-simplex as sorted index tuples, lexicographic order."""
    return list(itertools.combinations(range(m), k + 1))
