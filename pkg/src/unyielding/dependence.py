"""Affine dependence, Radon partition and the G/F tensegrity frameworks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import GeneralPositionViolation, InvalidDependence, ValidationError, ZeroCoefficient
from .geometry import PointConfiguration, Space, faces

GENERAL_POSITION_TOL = 1e-8
COEFF_TOL = 1e-10
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AffineDependence:
    """Coefficients ``alpha`` with ``sum alpha_i A_i = 0`` (and ``sum alpha_i = 0`` in R^n).

    ``alpha[0]`` is normalised to ``+1``.  ``canonical`` is False when the
    dependence space has dimension > 1 and an arbitrary representative was
    chosen.
    """

    alpha: np.ndarray
    canonical: bool = True
    flags: tuple = ()

    def __post_init__(self):
        a = np.array(self.alpha, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def positive(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(self.alpha > 0))

    @property
    def negative(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(self.alpha < 0))

    @property
    def s(self) -> int:
        return int(np.sum(self.alpha > 0))

    def product(self, face) -> float:
        return float(np.prod(self.alpha[list(face)]))


def _homogeneous_matrix(config: PointConfiguration) -> np.ndarray:
    p = config.points
    if config.space is Space.EUCLIDEAN:
        centred = p - p.mean(axis=0)
        scale = np.abs(centred).max() or 1.0
        return np.vstack([(centred / scale).T, np.ones(config.m)])
    return p.T


def general_position_violations(config: PointConfiguration, tol=GENERAL_POSITION_TOL):
    """Subsets of ``n + 1`` points that fail the singular-value gate."""
    n = config.n
    p = config.points
    bad = []
    for subset in itertools.combinations(range(config.m), n + 1):
        if config.space is Space.EUCLIDEAN:
            mat = p[list(subset[1:])] - p[subset[0]]
        else:
            mat = p[list(subset)]
        sv = np.linalg.svd(mat, compute_uv=False)
        if sv[0] == 0 or sv[-1] < tol * sv[0]:
            bad.append(subset)
    return bad


def check_general_position(config: PointConfiguration, tol=GENERAL_POSITION_TOL):
    bad = general_position_violations(config, tol)
    if bad:
        names = "".join(config.labels[i] for i in bad[0])
        what = "affinely" if config.space is Space.EUCLIDEAN else "linearly"
        raise GeneralPositionViolation(f"points {names} are {what} dependent", subset=bad[0])


def dependence_residual(alpha, config: PointConfiguration) -> float:
    """Residual of the defining linear system, relative to coordinate scale."""
    alpha = np.asarray(alpha, dtype=float)
    p = config.points
    scale = max(np.abs(p).max(), 1.0) * max(np.abs(alpha).max(), 1e-300)
    r = np.abs(alpha @ p).max()
    if config.space is Space.EUCLIDEAN:
        r = max(r, abs(alpha.sum()) * max(np.abs(p).max(), 1.0))
    return float(r / scale)


def affine_dependence(config: PointConfiguration, alpha=None, tol=GENERAL_POSITION_TOL):
    """Compute (or validate a supplied) affine dependence of the configuration.

    For ``m = n + 2`` points in general position the dependence is unique up
    to scale; it is taken as the least right-singular vector of the
    homogeneous system and scaled so that ``alpha[0] = 1``.
    """
    m, n = config.m, config.n
    if m < n + 2:
        raise ValidationError(f"need at least n + 2 = {n + 2} points, got {m}")
    if alpha is not None:
        a = np.asarray(alpha, dtype=float)
        if a.shape != (m,):
            raise InvalidDependence(f"alpha must have {m} entries")
        if not np.any(a):
            raise InvalidDependence("alpha must not be the zero vector")
        if dependence_residual(a, config) > 1e-8:
            raise InvalidDependence("supplied alpha does not satisfy the dependence identities")
        return AffineDependence(a, canonical=False, flags=("supplied",))

    if m == n + 2:
        check_general_position(config, tol)
    mat = _homogeneous_matrix(config)
    _, _, vt = np.linalg.svd(mat)
    a = vt[-1]
    flags = []
    if m > n + 2:
        flags.append("non-canonical")
    if abs(a[0]) < COEFF_TOL * np.abs(a).max():
        raise ZeroCoefficient("alpha_1 vanishes; cannot normalise to +1")
    a = a / a[0]
    if dependence_residual(a, config) > RESIDUAL_TOL * 100:
        raise GeneralPositionViolation("dependence system is ill-conditioned")
    if np.all(a > 0):
        flags.append("all-positive")
    return AffineDependence(a, canonical=(m == n + 2), flags=tuple(flags))


def radon_partition(dep: AffineDependence, tol=COEFF_TOL):
    """``(X1, X2)``: indices with positive and negative coefficients."""
    a = dep.alpha
    small = np.abs(a) < tol * np.abs(a).max()
    if np.any(small):
        raise ZeroCoefficient(f"alpha_{int(np.flatnonzero(small)[0]) + 1} is numerically zero")
    return dep.positive, dep.negative


class Label(str, Enum):
    CABLE = "cable"
    STRUT = "strut"
    BAR = "bar"

    @property
    def opposite(self) -> "Label":
        return {Label.CABLE: Label.STRUT, Label.STRUT: Label.CABLE, Label.BAR: Label.BAR}[self]


class Flavor(str, Enum):
    G = "G"
    F = "F"
    ALL_STRUT = "all-strut"
    ALL_CABLE = "all-cable"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, name) -> "Flavor":
        key = str(name).strip()
        for f in cls:
            if key.lower() == f.value.lower() or key.upper() == f.name:
                return f
        raise ValidationError(f"unknown framework flavor {name!r}")


def face_name(face, labels=None) -> str:
    if labels is None:
        return "".join(f"A{i + 1}" for i in face)
    return "".join(labels[i] for i in face)


@dataclass(frozen=True, eq=False)
class TensegrityFramework:
    """A label (cable / strut / bar) on every k-face of an (m-1)-simplex."""

    k: int
    m: int
    labels: dict = field(default_factory=dict)
    flavor: Flavor = Flavor.CUSTOM

    def __post_init__(self):
        if not 1 <= self.k <= self.m - 1:
            raise ValidationError(f"face dimension k={self.k} out of range for {self.m} vertices")
        clean = {}
        for face, lab in self.labels.items():
            key = tuple(sorted(int(i) for i in face))
            if len(key) != self.k + 1 or len(set(key)) != len(key):
                raise ValidationError(f"face {face} is not a {self.k}-face")
            if key[-1] >= self.m or key[0] < 0:
                raise ValidationError(f"face {face} references a missing vertex")
            clean[key] = Label(lab)
        object.__setattr__(self, "labels", dict(sorted(clean.items())))

    @property
    def faces(self):
        return list(self.labels)

    def complete(self) -> bool:
        return set(self.labels) == set(faces(self.m, self.k))

    def with_label(self, face, label) -> "TensegrityFramework":
        labels = dict(self.labels)
        labels[tuple(sorted(face))] = Label(label)
        return TensegrityFramework(self.k, self.m, labels, Flavor.CUSTOM)

    def complement(self) -> "TensegrityFramework":
        swapped = {f: lab.opposite for f, lab in self.labels.items()}
        flavor = {
            Flavor.G: Flavor.F,
            Flavor.F: Flavor.G,
            Flavor.ALL_CABLE: Flavor.ALL_STRUT,
            Flavor.ALL_STRUT: Flavor.ALL_CABLE,
        }.get(self.flavor, Flavor.CUSTOM)
        return TensegrityFramework(self.k, self.m, swapped, flavor)

    def relabelled(self, perm) -> "TensegrityFramework":
        """Framework on the permuted vertex order: new vertex ``j`` is old ``perm[j]``."""
        inv = {old: new for new, old in enumerate(perm)}
        labels = {tuple(sorted(inv[i] for i in f)): lab for f, lab in self.labels.items()}
        return TensegrityFramework(self.k, self.m, labels, self.flavor)


def build_framework(dep: AffineDependence, k: int, flavor) -> TensegrityFramework:
    """Label every k-face by the parity rule.

    A face with an odd number of negative-coefficient vertices is a cable in
    ``G`` and a strut in ``F``; even faces get the opposite label.
    """
    flavor = Flavor.parse(flavor) if not isinstance(flavor, Flavor) else flavor
    m = dep.m
    if not 1 <= k <= m - 2:
        raise ValidationError(f"k must satisfy 1 <= k <= n = {m - 2}")
    if flavor is Flavor.CUSTOM:
        raise ValidationError("custom frameworks carry explicit labels; use TensegrityFramework")
    neg = set(dep.negative)
    labels = {}
    for face in faces(m, k):
        if flavor is Flavor.ALL_STRUT:
            labels[face] = Label.STRUT
        elif flavor is Flavor.ALL_CABLE:
            labels[face] = Label.CABLE
        else:
            odd = len(neg.intersection(face)) % 2 == 1
            cable = odd if flavor is Flavor.G else not odd
            labels[face] = Label.CABLE if cable else Label.STRUT
    return TensegrityFramework(k, m, labels, flavor)
