"""The invariants c_0..c_n and the characteristic polynomial (Euclidean case).

``c_k`` is the alpha-weighted sum over k-subsets of wedge inner products
taken from two arbitrary probe points; it does not depend on the probes.
``f(x) = sum_i (-1)^i c_i x^(n-i)`` is the characteristic polynomial of the
symmetric matrix ``B^T D B`` where ``B`` holds the edge vectors from a pivot
vertex, so its roots come from a symmetric eigensolver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dependence import AffineDependence, affine_dependence, dependence_residual
from .errors import InvalidDependence, RootNearZero, ValidationError
from .geometry import PointConfiguration, Space, chord_matrix

ROOT_ZERO_TOL = 1e-8
REPEATED_ROOT_TOL = 1e-7
PERPENDICULAR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class InvariantProfile:
    """``c = (c_0, ..., c_n)`` plus, when available, the roots of ``f``.

    Unavailable coefficients (curved metrics beyond the exact range) are NaN.
    """

    c: np.ndarray
    roots: np.ndarray | None = None
    positive_count: int | None = None
    negative_count: int | None = None
    alpha: np.ndarray | None = None
    route: str = ""

    def __post_init__(self):
        object.__setattr__(self, "c", np.array(self.c, dtype=float))
        if self.roots is not None:
            object.__setattr__(self, "roots", np.sort(np.array(self.roots)))

    @property
    def n(self) -> int:
        return len(self.c) - 1

    @property
    def charpoly(self) -> np.ndarray:
        """Coefficients of ``f``, highest degree first."""
        return charpoly_coefficients(self.c)

    @property
    def available(self) -> int:
        finite = np.isfinite(self.c)
        return int(np.argmin(finite)) if not finite.all() else len(self.c)


def charpoly_coefficients(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    return c * (-1.0) ** np.arange(len(c))


@dataclass(frozen=True, eq=False)
class MatrixRealization:
    B: np.ndarray
    D: np.ndarray
    pivot: int

    @property
    def symmetric_form(self) -> np.ndarray:
        s = self.B.T @ self.D @ self.B
        return 0.5 * (s + s.T)

    @property
    def outer_form(self) -> np.ndarray:
        return self.B @ self.B.T @ self.D


def _euclidean_only(config):
    if config.space is not Space.EUCLIDEAN:
        raise ValidationError("this invariant route is Euclidean; use the curved module")


def matrix_realization(dep: AffineDependence, config: PointConfiguration, pivot=None):
    """Rows of ``B`` are ``A_i - A_pivot`` for every other vertex; ``D = diag(alpha)``."""
    _euclidean_only(config)
    m = config.m
    pivot = m - 1 if pivot is None else int(pivot)
    others = [i for i in range(m) if i != pivot]
    p = config.points
    B = p[others] - p[pivot]
    D = np.diag(dep.alpha[others])
    return MatrixRealization(B, D, pivot)


def _probe_config(config, P, Q):
    d = config.metric.ambient_dim
    P = np.zeros(d) if P is None else np.asarray(P, dtype=float)
    Q = np.zeros(d) if Q is None else np.asarray(Q, dtype=float)
    dim = max(d, len(P), len(Q))
    pts = np.hstack([config.points, np.zeros((config.m, dim - d))])
    return pts, np.pad(P, (0, dim - len(P))), np.pad(Q, (0, dim - len(Q)))


def c_direct(k: int, dep: AffineDependence, config: PointConfiguration, P=None, Q=None) -> float:
    """``c_k`` by direct summation over k-subsets, with probe points ``P`` and ``Q``.

    Probes may have more coordinates than the configuration; the points are
    then embedded in the larger space.
    """
    _euclidean_only(config)
    if k < 0 or k > config.m - 1:
        raise ValidationError(f"k={k} out of range")
    if k == 0:
        return 1.0
    pts, P, Q = _probe_config(config, P, Q)
    dp = pts - P
    dq = pts - Q
    G = dp @ dq.T
    a = dep.alpha
    total = 0.0
    for subset in itertools.combinations(range(config.m), k):
        idx = list(subset)
        total += float(np.prod(a[idx])) * float(np.linalg.det(G[np.ix_(idx, idx)]))
    return total


def principal_minor_sums(mat: np.ndarray, kmax: int) -> np.ndarray:
    """``e_k`` = sum of k x k principal minors, for k = 0..kmax."""
    size = mat.shape[0]
    out = np.zeros(kmax + 1)
    out[0] = 1.0
    for k in range(1, kmax + 1):
        out[k] = sum(
            float(np.linalg.det(mat[np.ix_(s, s)])) for s in map(list, itertools.combinations(range(size), k))
        )
    return out


def c_matrix(dep: AffineDependence, config: PointConfiguration, pivot=None) -> InvariantProfile:
    """All ``c_k`` at once from principal minors of ``B B^T D``, roots from ``B^T D B``."""
    _euclidean_only(config)
    real = matrix_realization(dep, config, pivot)
    n = config.n
    c = principal_minor_sums(real.outer_form, n)
    roots = np.linalg.eigvalsh(real.symmetric_form)
    return InvariantProfile(c=c, roots=roots, alpha=dep.alpha, route="matrix")


def c_direct_profile(dep, config, P=None, Q=None) -> InvariantProfile:
    c = [c_direct(k, dep, config, P, Q) for k in range(config.n + 1)]
    return InvariantProfile(c=c, alpha=dep.alpha, route="direct")


def predicted_sign_counts(dep: AffineDependence):
    """``(s - 1, n + 1 - s)`` positive and negative roots for s positive coefficients."""
    s = dep.s
    n = dep.m - 2
    return s - 1, n + 1 - s


def roots_and_signs(profile: InvariantProfile, dep: AffineDependence = None, tol=ROOT_ZERO_TOL):
    """Sorted real roots and their sign counts.

    Raises :class:`RootNearZero` when a root is indistinguishable from zero,
    which the theory rules out for points in general position.
    """
    if profile.roots is None:
        raise ValidationError("profile has no eigenvalue roots")
    roots = np.sort(np.asarray(profile.roots, dtype=float))
    scale = np.abs(roots).max() if roots.size else 0.0
    if roots.size and (scale == 0 or np.any(np.abs(roots) < tol * scale)):
        raise RootNearZero("a characteristic root is numerically zero; check general position")
    return roots, int(np.sum(roots > 0)), int(np.sum(roots < 0))


def invariant_profile(dep: AffineDependence, config: PointConfiguration, tol=ROOT_ZERO_TOL):
    """Matrix-route profile with sign counts filled in."""
    prof = c_matrix(dep, config)
    roots, pos, neg = roots_and_signs(prof, dep, tol)
    return InvariantProfile(prof.c, roots, pos, neg, dep.alpha, route="matrix")


class Sphericity(str, Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


def circumsphere(points) -> tuple[np.ndarray, float]:
    """Centre and radius of the sphere through ``n + 1`` points of ``R^n``."""
    p = np.asarray(points, dtype=float)
    base = p[0]
    rows = p[1:] - base
    rhs = 0.5 * np.einsum("ij,ij->i", rows, rows)
    centre_offset = np.linalg.solve(rows, rhs)
    return base + centre_offset, float(np.linalg.norm(centre_offset))


def c1_tolerance(dep: AffineDependence, config: PointConfiguration, tol=1e-9) -> float:
    return tol * float(np.abs(dep.alpha).max()) * float(chord_matrix(config).max())


def cosphericity(dep: AffineDependence, config: PointConfiguration, tol=1e-9):
    """Where ``A_1`` sits relative to the sphere through the other points, via the sign of ``c_1``."""
    _euclidean_only(config)
    if config.m != config.n + 2:
        raise ValidationError("cosphericity needs exactly n + 2 points")
    c1 = c_direct(1, dep, config)
    if abs(c1) < c1_tolerance(dep, config, tol):
        return Sphericity.ON, c1
    return (Sphericity.OUTSIDE if c1 > 0 else Sphericity.INSIDE), c1


def circumsphere_verdict(config: PointConfiguration, tol=1e-9) -> Sphericity:
    """Independent check: distance of ``A_1`` to the circumsphere of the rest."""
    centre, radius = circumsphere(config.points[1:])
    dist = float(np.linalg.norm(config.points[0] - centre))
    if abs(dist - radius) < tol * max(radius, 1.0) * 10:
        return Sphericity.ON
    return Sphericity.OUTSIDE if dist > radius else Sphericity.INSIDE


def perpendicularity_test(config: PointConfiguration, tol=PERPENDICULAR_TOL) -> bool:
    """True when every pair of vertex-disjoint edges is perpendicular."""
    _euclidean_only(config)
    p = config.points
    for i, j, k, l in itertools.permutations(range(config.m), 4):
        if i < j and k < l and i < k:
            e1 = p[j] - p[i]
            e2 = p[l] - p[k]
            if abs(e1 @ e2) > tol * np.linalg.norm(e1) * np.linalg.norm(e2):
                return False
    return True


def repeated_root_check(profile: InvariantProfile, tol=REPEATED_ROOT_TOL) -> bool:
    """True when all roots coincide to within ``tol`` relative to the largest."""
    roots = np.asarray(profile.roots, dtype=float)
    scale = np.abs(roots).max()
    return bool(roots.max() - roots.min() < tol * scale)


def generalized_charpoly(config: PointConfiguration, alpha=None) -> InvariantProfile:
    """Characteristic polynomial for ``m >= n + 2`` points and any valid dependence.

    Roots are eigenvalues of ``B^T D B`` with ``B`` the raw coordinates, so
    they are real by construction.  The ``c`` vector is computed by direct
    summation.  When ``alpha`` is omitted an arbitrary representative of the
    dependence space is used and reported.
    """
    _euclidean_only(config)
    dep = affine_dependence(config, alpha)
    a = dep.alpha
    if dependence_residual(a, config) > 1e-8:
        raise InvalidDependence("alpha does not satisfy the dependence identities")
    B = config.points
    sym = B.T @ np.diag(a) @ B
    roots = np.linalg.eigvalsh(0.5 * (sym + sym.T))
    c = [c_direct(k, dep, config) for k in range(config.n + 1)]
    return InvariantProfile(c=c, roots=roots, alpha=a, route="generalized")


def companion_roots(profile: InvariantProfile) -> np.ndarray:
    """Roots of ``f`` from its coefficients (companion matrix); may be complex."""
    return np.roots(profile.charpoly)


def elementary_symmetric(values) -> np.ndarray:
    """``e_0..e_n`` of a list of numbers."""
    out = np.zeros(len(values) + 1)
    out[0] = 1.0
    for v in values:
        out[1:] = out[1:] + v * out[:-1]
    return out

