"""Seeded random configurations and the search report container.

Every randomized trial draws from ``numpy.random.default_rng([seed, trial])``
so trials are independent of each other and of evaluation order; a report
can always be regenerated trial-by-trial from ``(seed, trial)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import MetricSignature, PointConfiguration, Space, exp_map

HYPERBOLIC_RADIUS_CAP = 2.0
SPHERICAL_RADIUS_CAP = 1.2


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def base_point(metric: MetricSignature) -> np.ndarray:
    """Hyperboloid apex ``e_0``, or the pole ``e_last`` of the working hemisphere."""
    p = np.zeros(metric.ambient_dim)
    if metric.space is Space.HYPERBOLIC:
        p[0] = 1.0
    elif metric.space is Space.SPHERICAL:
        p[-1] = 1.0
    return p


def random_tangent(metric: MetricSignature, rng, scale=1.0, cap=None) -> np.ndarray:
    """Gaussian tangent vector at :func:`base_point`, norm clipped at ``cap``."""
    d = metric.ambient_dim
    v = rng.normal(scale=scale, size=d)
    if metric.space is Space.HYPERBOLIC:
        v[0] = 0.0
    elif metric.space is Space.SPHERICAL:
        v[-1] = 0.0
    if cap is not None:
        r = float(np.linalg.norm(v))
        if r > cap:
            v *= cap / r
    return v


def random_curved_points(metric: MetricSignature, m: int, rng, scale=1.0, cap=None) -> np.ndarray:
    if cap is None:
        cap = HYPERBOLIC_RADIUS_CAP if metric.space is Space.HYPERBOLIC else SPHERICAL_RADIUS_CAP
    base = base_point(metric)
    return np.array([exp_map(base, random_tangent(metric, rng, scale, cap), metric) for _ in range(m)])


def random_configuration(metric: MetricSignature, m: int, rng, scale=1.0, cap=None) -> PointConfiguration:
    if metric.space is Space.EUCLIDEAN:
        return PointConfiguration(metric, rng.normal(scale=scale, size=(m, metric.n)))
    return PointConfiguration(metric, random_curved_points(metric, m, rng, scale, cap))


def random_orthogonal(d: int, rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    return q * np.sign(np.diag(r))


def random_lorentz_boost(d: int, rng, rapidity_scale=0.5) -> np.ndarray:
    """A random element of SO+(d-1, 1): spatial rotation composed with a boost."""
    rot = np.eye(d)
    rot[1:, 1:] = random_orthogonal(d - 1, rng)
    direction = rng.normal(size=d - 1)
    direction /= np.linalg.norm(direction)
    phi = rng.normal(scale=rapidity_scale)
    boost = np.eye(d)
    boost[0, 0] = math.cosh(phi)
    boost[0, 1:] = boost[1:, 0] = math.sinh(phi) * direction
    boost[1:, 1:] += (math.cosh(phi) - 1.0) * np.outer(direction, direction)
    return boost @ rot


def random_isometry(metric: MetricSignature, rng):
    """A callable applying a random isometry of the model to an array of points."""
    d = metric.ambient_dim
    if metric.space is Space.EUCLIDEAN:
        q = random_orthogonal(d, rng)
        shift = rng.normal(size=d)
        return lambda pts: np.asarray(pts) @ q.T + shift
    if metric.space is Space.SPHERICAL:
        q = random_orthogonal(d, rng)
        return lambda pts: np.asarray(pts) @ q.T
    lam = random_lorentz_boost(d, rng)
    return lambda pts: np.asarray(pts) @ lam.T


def _plain(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class SearchReport:
    """Outcome of a randomized search; never a proof.

    ``margin`` is the per-trial quantity whose sign decides the conjectured
    property (larger is safer).  ``violations`` carry everything needed to
    regenerate the offending trial.
    """

    kind: str
    space: str
    dim: int
    trials: int
    seed: int
    accepted: int = 0
    min_margin: float = math.inf
    min_margin_trial: int | None = None
    max_distortion: float | None = None
    violations: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = _plain(asdict(self))
        d["holds"] = self.holds
        return d
