"""Motion paths, face-volume derivatives, and the unyielding checks.

Euclidean faces are measured by the squared volume ``(k! V_k)^2``; curved
faces by ``V_k`` itself.  A motion is admissible for a framework when no
cable face grows, no strut face shrinks and no bar face changes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import least_squares, linprog

from .curved import MAX_EXACT_C, curved_c, d_pair
from .dependence import AffineDependence, Label, TensegrityFramework, affine_dependence
from .errors import (
    DegeneracyError,
    DegenerateHyperplane,
    DimensionMismatch,
    SignalTooSmall,
    SolverFailure,
    TangencyViolation,
    UnsupportedDimension,
    ValidationError,
)
from .geometry import MetricSignature, PointConfiguration, Space, faces, project_to_surface, wedge_inner
from .invariants import c_direct
from .sampling import SearchReport, random_isometry, trial_rng

MAX_PATH_DEGREE = 4
TANGENCY_TOL = 1e-9
UNYIELDING_TOL = 1e-8
SIGN_GRID = (1e-2, 1e-3, 1e-4)
NOISE_FLOOR = 1e-12
FEASIBILITY_TOL = 1e-9
DISTORTION_TOL = 1e-6


class Verdict(str, Enum):
    FIRST_ORDER_UNYIELDING = "FirstOrderUnyielding"
    FLEX_FOUND = "FlexFound"


def _points_metric(points, space: Space) -> MetricSignature:
    d = np.asarray(points).shape[-1]
    return MetricSignature(space, d if space is Space.EUCLIDEAN else d - 1)


def _surface_scale(q, metric):
    """``s`` with ``q / s`` on the model surface, from ``kappa * q.q``."""
    w = metric.weights
    qq = np.einsum("...j,j,...j->...", q, w, q)
    return np.sqrt(np.abs(qq)), qq


@dataclass(frozen=True, eq=False)
class MotionPath:
    """Vertex paths ``p_i(t) = A_i + sum_j c_ij t^j`` (degree <= 4).

    Curved paths are rescaled along rays onto the model surface; the
    velocity accounts for the projection analytically.
    """

    base: PointConfiguration
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        if c.ndim != 3 or c.shape[0] != self.base.m or c.shape[2] != self.base.metric.ambient_dim:
            raise DimensionMismatch("coefficients must have shape (m, degree, ambient_dim)")
        if not 1 <= c.shape[1] <= MAX_PATH_DEGREE:
            raise ValidationError(f"path degree must be between 1 and {MAX_PATH_DEGREE}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def metric(self) -> MetricSignature:
        return self.base.metric

    @property
    def degree(self) -> int:
        return self.coefficients.shape[1]

    def _raw(self, t):
        powers = t ** np.arange(1, self.degree + 1)
        dpowers = np.arange(1, self.degree + 1) * t ** np.arange(self.degree)
        q = self.base.points + np.einsum("j,mjd->md", powers, self.coefficients)
        dq = np.einsum("j,mjd->md", dpowers, self.coefficients)
        return q, dq

    def positions(self, t: float) -> np.ndarray:
        if t == 0:
            return np.array(self.base.points)
        q, _ = self._raw(float(t))
        if not self.metric.curved:
            return q
        s, qq = _surface_scale(q, self.metric)
        if np.any(qq * self.metric.curvature <= 0):
            raise DegeneracyError(f"path leaves the projectable region of the model at t={t:g}")
        p = q / s[:, None]
        if self.metric.space is Space.HYPERBOLIC:
            p *= np.sign(p[:, :1])
        return p

    def velocities(self, t: float) -> np.ndarray:
        q, dq = self._raw(float(t))
        if not self.metric.curved:
            return dq
        kappa = self.metric.curvature
        s, _ = _surface_scale(q, self.metric)
        qdq = np.einsum("md,d,md->m", q, self.metric.weights, dq)
        v = dq / s[:, None] - kappa * q * (qdq / s**3)[:, None]
        if self.metric.space is Space.HYPERBOLIC:
            v *= np.sign(q[:, :1])
        return v

    def configuration(self, t: float) -> PointConfiguration:
        return self.base.with_points(self.positions(t))

    def surface_residual(self, t: float) -> float:
        if not self.metric.curved:
            return 0.0
        p = self.positions(t)
        _, qq = _surface_scale(p, self.metric)
        return float(np.abs(qq - self.metric.self_product).max())

    @classmethod
    def linear(cls, config: PointConfiguration, velocities) -> "MotionPath":
        v = np.asarray(velocities, dtype=float)
        return cls(config, v[:, None, :])

    @classmethod
    def polynomial(cls, config: PointConfiguration, coefficients) -> "MotionPath":
        return cls(config, coefficients)

    @classmethod
    def lift(cls, config: PointConfiguration, index=0, speed=1.0, in_space=None, degree=1) -> "MotionPath":
        """Lift ``config`` into one more dimension and move vertex ``index`` along the new axis.

        ``in_space`` optionally adds an in-space velocity field (one row per
        vertex, base-space coordinates) so the motion is not a pure lift.
        """
        lifted = config.lifted(1)
        d = lifted.metric.ambient_dim
        coeff = np.zeros((config.m, degree, d))
        coeff[index, 0, -1] = speed
        if in_space is not None:
            extra = np.asarray(in_space, dtype=float)
            coeff[:, 0, : extra.shape[1]] += extra
        return cls(lifted, coeff)


def _edge_weights(face_points, space: Space):
    """``d(face vol measure) / d(chord^2_ij)`` for every vertex pair of a face."""
    k = len(face_points) - 1
    pts = np.asarray(face_points)
    metric = _points_metric(pts, space)
    out = {}
    for i, j in itertools.combinations(range(k + 1), 2):
        rest = [r for r in range(k + 1) if r not in (i, j)]
        if space is Space.EUCLIDEAN:
            rows_i = [pts[r] - pts[i] for r in rest]
            rows_j = [pts[r] - pts[j] for r in rest]
            out[(i, j)] = wedge_inner(rows_i, rows_j, metric)
        else:
            o_norm = math.sqrt(abs(wedge_inner(list(pts), list(pts), metric)))
            dv = d_pair(pts[i], pts[j], [pts[r] for r in rest], space)
            out[(i, j)] = dv / (2.0 * math.factorial(k) * o_norm)
    return out


def face_gradient(face, points, space) -> np.ndarray:
    """Gradient of the face measure with respect to all vertex velocities, shape ``(m, d)``.

    Euclidean faces use the squared volume, curved faces ``V_k``.
    """
    space = Space.parse(space)
    pts = np.asarray(points, dtype=float)
    metric = _points_metric(pts, space)
    face = list(face)
    grad = np.zeros_like(pts)
    for (a, b), g in _edge_weights(pts[face], space).items():
        i, j = face[a], face[b]
        e = 2.0 * g * metric.weights * (pts[i] - pts[j])
        grad[i] += e
        grad[j] -= e
    return grad


def _check_tangent(points, velocities, metric, tol=TANGENCY_TOL):
    if not metric.curved:
        return
    dots = np.einsum("md,d,md->m", points, metric.weights, velocities)
    scale = max(1.0, float(np.abs(velocities).max()))
    bad = np.flatnonzero(np.abs(dots) > tol * scale)
    if bad.size:
        raise TangencyViolation(f"velocity of vertex {int(bad[0]) + 1} is not tangent to the model surface")


def _velocities_for(config, velocities):
    v = np.asarray(velocities, dtype=float)
    if v.shape[0] != config.m:
        raise DimensionMismatch("one velocity row per vertex is required")
    d = config.metric.ambient_dim
    if v.shape[1] < d:
        raise DimensionMismatch("velocities have fewer coordinates than the configuration")
    extra = v.shape[1] - d
    if extra:
        config = config.lifted(extra)
    return config, v


def face_volume_derivative(face, velocities, config: PointConfiguration) -> float:
    """Rate of the face measure (squared volume, or curved ``V_k``) under the given velocities.

    Velocities may carry more coordinates than the configuration; the
    configuration is then embedded in the larger space.
    """
    config, v = _velocities_for(config, velocities)
    _check_tangent(config.points, v, config.metric)
    return float(np.sum(face_gradient(face, config.points, config.space) * v))


def face_weight(face, points, space) -> float:
    """``|O a_I|`` in the curved models, 1 in Euclidean space."""
    if Space.parse(space) is Space.EUCLIDEAN:
        return 1.0
    pts = np.asarray(points)[list(face)]
    metric = _points_metric(pts, Space.parse(space))
    return math.sqrt(abs(wedge_inner(list(pts), list(pts), metric)))


def weighted_derivative_sum(alpha, points, velocities, k, space) -> tuple[float, float]:
    """``sum_I alpha_I w_I D_I`` over all k-faces, plus the sum of absolute terms (noise scale)."""
    alpha = np.asarray(alpha, dtype=float)
    total = 0.0
    absolute = 0.0
    for face in faces(len(alpha), k):
        grad = face_gradient(face, points, space)
        term = float(np.prod(alpha[list(face)])) * face_weight(face, points, space) * float(np.sum(grad * velocities))
        total += term
        absolute += abs(term)
    return total, absolute


def equality_residual(config: PointConfiguration, velocities, k: int, dep: AffineDependence = None) -> float:
    """Weighted derivative sum for a motion inside the base space; zero for admissible data."""
    if not 1 <= k <= config.n:
        raise ValidationError(f"k must satisfy 1 <= k <= n = {config.n}")
    dep = affine_dependence(config) if dep is None else dep
    v = np.asarray(velocities, dtype=float)
    if v.shape != config.points.shape:
        raise DimensionMismatch("equality residual needs in-space velocities, one row per vertex")
    _check_tangent(config.points, v, config.metric)
    total, _ = weighted_derivative_sum(dep.alpha, config.points, v, k, config.space)
    return total


def path_equality_residuals(path: MotionPath, k: int, ts) -> list:
    """Weighted derivative sums along a path, with ``alpha(t)`` re-solved at every ``t``."""
    out = []
    for t in ts:
        cfg = path.configuration(t)
        dep = affine_dependence(cfg)
        total, _ = weighted_derivative_sum(dep.alpha, cfg.points, path.velocities(t), k, cfg.space)
        out.append(total)
    return out


def _hyperplane_normal(points, metric):
    """Unit normal (for the model's bilinear form) of the hyperplane spanned by ``points``.

    Euclidean: the affine hyperplane through the points; curved: the linear
    hyperplane through the origin and the points.
    """
    pts = np.asarray(points, dtype=float)
    d = metric.ambient_dim
    if metric.space is Space.EUCLIDEAN:
        rows = pts[1:] - pts[0]
        anchor = pts[0]
    else:
        rows = pts * metric.weights
        anchor = np.zeros(d)
    _, sv, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(sv > 1e-10 * (sv[0] if sv.size else 1.0)))
    if rank != d - 1:
        raise DegenerateHyperplane(f"the reflecting points span rank {rank}, need {d - 1}")
    # for curved rows W p, vt[-1] is orthogonal to every point in the bilinear form
    normal = vt[-1]
    nn = float(np.dot(normal * metric.weights, normal))
    if nn <= 0:
        raise DegenerateHyperplane("reflecting hyperplane is not timelike")
    return normal / math.sqrt(nn), anchor


def reflect(x, normal, anchor, metric) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    w = metric.weights
    return x - 2.0 * float(np.dot((x - anchor) * w, normal)) * normal


def mirror_point(config: PointConfiguration, apex_index: int = 0) -> np.ndarray:
    """Reflection of the apex vertex over the hyperplane spanned by the others."""
    others = [i for i in range(config.m) if i != apex_index]
    normal, anchor = _hyperplane_normal(config.points[others], config.metric)
    out = reflect(config.points[apex_index], normal, anchor, config.metric)
    if config.metric.curved:
        out = project_to_surface(out, config.metric)
    return out


def mirror_dependence(config: PointConfiguration, mirror=None) -> np.ndarray:
    """``alpha(t)``: coefficients with ``alpha_1 (A_0 + A_1)/2 + sum_{i>=2} alpha_i A_i = 0``, ``alpha_1 = 1``."""
    a0 = mirror_point(config, 0) if mirror is None else mirror
    pts = np.array(config.points)
    pts[0] = 0.5 * (a0 + pts[0])
    if config.space is Space.EUCLIDEAN:
        mat = np.vstack([(pts - pts.mean(axis=0)).T, np.ones(config.m)])
    else:
        mat = pts.T
    _, _, vt = np.linalg.svd(mat)
    a = vt[-1]
    if abs(a[0]) < 1e-12 * np.abs(a).max():
        raise DegenerateHyperplane("mirror dependence has a vanishing first coefficient")
    return a / a[0]


@dataclass
class SignCheckReport:
    k: int
    space: str
    c_prev: float
    predicted_sign: int
    rows: list = field(default_factory=list)
    in_space: bool = False
    max_residual: float = 0.0

    @property
    def signs_agree(self) -> bool:
        return all(r["sign_agrees"] for r in self.rows)

    @property
    def final_ratio(self) -> float:
        return self.rows[-1]["ratio"] if self.rows else math.nan

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "space": self.space,
            "c_prev": self.c_prev,
            "predicted_sign": self.predicted_sign,
            "in_space": self.in_space,
            "max_residual": self.max_residual,
            "signs_agree": self.signs_agree,
            "rows": self.rows,
        }


def _c_prev(k, dep, base_config):
    if k - 1 == 0:
        return 1.0
    if base_config.space is Space.EUCLIDEAN:
        return c_direct(k - 1, dep, base_config)
    if k - 1 > MAX_EXACT_C:
        raise UnsupportedDimension(f"c_{k - 1} is not available in curved space")
    return curved_c(k - 1, dep, base_config)


def inequality_sign_check(dep: AffineDependence, config: PointConfiguration, path: MotionPath, k: int,
                          grid=SIGN_GRID) -> SignCheckReport:
    """Weighted derivative sum along a path that leaves the base space, against its leading-order prediction.

    ``config`` is the base-space configuration at ``t = 0`` and ``path``
    lives one dimension up.  At each ``t``: ``A_0(t)`` is the mirror of
    ``A_1(t)``, ``alpha(t)`` solves the mirror system, and the prediction is
    ``-(1/4) alpha_1^2 (chord^2(A_0, A_1))' c_{k-1}`` (times ``1/(2 k!)`` in
    the curved models).
    """
    if path.metric.n != config.n + 1 or path.metric.space is not config.space:
        raise DimensionMismatch("path must live in the model space one dimension above the configuration")
    if not 1 <= k <= config.n:
        raise ValidationError(f"k must satisfy 1 <= k <= n = {config.n}")
    c_prev = _c_prev(k, dep, config)
    if c_prev == 0:
        raise SignalTooSmall(f"c_{k - 1} vanishes; the sign prediction is empty")
    curved = config.metric.curved
    factor = 1.0 / (2.0 * math.factorial(k)) if curved else 1.0
    metric = path.metric
    report = SignCheckReport(k, config.space.value, float(c_prev), -int(np.sign(c_prev)))

    def gap(t):
        cfg = path.configuration(t)
        a0 = mirror_point(cfg, 0)
        diff = a0 - cfg.points[0]
        return float(np.dot(diff * metric.weights, diff)), cfg, a0

    lifted_scale = max(1.0, path.base.scale() ** 2)
    in_space = all(gap(t)[0] < 1e-20 * lifted_scale for t in grid)
    report.in_space = in_space
    any_signal = False
    for t in grid:
        g, cfg, a0 = gap(t)
        alpha = mirror_dependence(cfg, a0)
        total, absolute = weighted_derivative_sum(alpha, cfg.points, path.velocities(t), k, config.space)
        if in_space:
            report.max_residual = max(report.max_residual, abs(total))
            report.rows.append({"t": t, "weighted_sum": total, "prediction": 0.0, "ratio": math.nan,
                                "sign_agrees": True})
            continue
        h = 1e-3 * t
        rate = (gap(t + h)[0] - gap(t - h)[0]) / (2 * h)
        prediction = -0.25 * alpha[0] ** 2 * factor * rate * c_prev
        if abs(total) > NOISE_FLOOR * max(absolute, 1e-300):
            any_signal = True
        ratio = total / prediction if prediction != 0 else math.nan
        sign_ok = bool(np.sign(total) == report.predicted_sign)
        report.rows.append({"t": t, "weighted_sum": total, "prediction": prediction, "ratio": ratio,
                            "sign_agrees": sign_ok})
    if not in_space and not any_signal:
        raise SignalTooSmall("weighted derivative sum is below round-off at every grid point")
    return report


@dataclass
class FlexReport:
    verdict: Verdict
    optimum: float
    face_derivatives: dict
    witness: np.ndarray | None = None
    max_violation: float = 0.0
    ambient_dim: int = 0
    k: int = 0

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "optimum": self.optimum,
            "k": self.k,
            "ambient_dim": self.ambient_dim,
            "max_violation": self.max_violation,
            "face_derivatives": {"-".join(str(i + 1) for i in f): v for f, v in self.face_derivatives.items()},
            "witness": None if self.witness is None else self.witness.tolist(),
        }


def first_order_flex(framework: TensegrityFramework, config: PointConfiguration, ambient_dim=None,
                     tol=UNYIELDING_TOL) -> FlexReport:
    """Search for vertex velocities that respect every label with some strict slack.

    Maximises the total slack of the cable and strut inequalities over
    velocities in the unit box (curved velocities tangent to the surface).
    A zero optimum means no first-order motion changes any face.
    """
    if framework.m != config.m:
        raise ValidationError("framework and configuration disagree on the number of vertices")
    if not framework.complete():
        raise ValidationError("framework must label every k-face")
    n = config.n
    ambient_dim = n if ambient_dim is None else int(ambient_dim)
    if ambient_dim not in (n, n + 1):
        raise ValidationError(f"ambient dimension must be n={n} or n+1={n + 1}")
    cfg = config.lifted(ambient_dim - n) if ambient_dim > n else config
    pts = cfg.points
    m, d = pts.shape
    nv = m * d
    face_list = framework.faces
    grads, rows = {}, {}
    for face in face_list:
        g = face_gradient(face, pts, cfg.space).ravel()
        s = np.abs(g).max()
        grads[face] = g
        rows[face] = g / s if s > 0 else g
    slack_faces = [f for f in face_list if framework.labels[f] is not Label.BAR]
    ns = len(slack_faces)
    c = np.concatenate([np.zeros(nv), -np.ones(ns)])
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for j, face in enumerate(slack_faces):
        row = np.zeros(nv + ns)
        sign = 1.0 if framework.labels[face] is Label.CABLE else -1.0
        row[:nv] = sign * rows[face]
        row[nv + j] = 1.0
        A_ub.append(row)
        b_ub.append(0.0)
    for face in face_list:
        if framework.labels[face] is Label.BAR:
            A_eq.append(np.concatenate([rows[face], np.zeros(ns)]))
            b_eq.append(0.0)
    if cfg.metric.curved:
        for i in range(m):
            row = np.zeros(nv + ns)
            row[i * d:(i + 1) * d] = pts[i] * cfg.metric.weights
            A_eq.append(row)
            b_eq.append(0.0)
    bounds = [(-1.0, 1.0)] * nv + [(0.0, 1.0)] * ns
    res = linprog(
        c,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        raise SolverFailure(f"linear program failed: {res.message}")
    optimum = float(-res.fun) + 0.0
    v = res.x[:nv].reshape(m, d)
    derivs = {face: float(grads[face] @ res.x[:nv]) for face in face_list}
    violation = 0.0
    for face in face_list:
        lab = framework.labels[face]
        val = derivs[face]
        if lab is Label.CABLE:
            violation = max(violation, val)
        elif lab is Label.STRUT:
            violation = max(violation, -val)
        else:
            violation = max(violation, abs(val))
    if optimum < tol:
        return FlexReport(Verdict.FIRST_ORDER_UNYIELDING, optimum, {f: 0.0 for f in face_list}, None,
                          violation, ambient_dim, framework.k)
    return FlexReport(Verdict.FLEX_FOUND, optimum, derivs, v, violation, ambient_dim, framework.k)


def _embed(config: PointConfiguration):
    """Lift into one more dimension; return the lifted configuration and a parametrisation.

    The parametrisation maps a flat parameter vector to surface points, and
    supplies the per-point Jacobian ``dp_i/dx_i`` of shape ``(m, d, q)``.
    Spheres use ``y / |y|``; hyperboloids use ``(sqrt(1 + |s|^2), s)``.
    """
    lifted = config.lifted(1)
    space = config.space
    d = lifted.metric.ambient_dim
    m = config.m
    if space is Space.EUCLIDEAN:
        def to_points(x):
            return x.reshape(m, d)

        def jacobian(x):
            return np.broadcast_to(np.eye(d), (m, d, d))

        def to_params(p):
            return np.asarray(p).ravel()
    elif space is Space.SPHERICAL:
        def to_points(x):
            y = x.reshape(m, d)
            return y / np.linalg.norm(y, axis=1, keepdims=True)

        def jacobian(x):
            y = x.reshape(m, d)
            r = np.linalg.norm(y, axis=1)
            p = y / r[:, None]
            return (np.eye(d)[None] - p[:, :, None] * p[:, None, :]) / r[:, None, None]

        def to_params(p):
            return np.asarray(p).ravel()
    else:
        def to_points(x):
            s = x.reshape(m, d - 1)
            return np.hstack([np.sqrt(1.0 + np.sum(s * s, axis=1, keepdims=True)), s])

        def jacobian(x):
            s = x.reshape(m, d - 1)
            p0 = np.sqrt(1.0 + np.sum(s * s, axis=1))
            head = (s / p0[:, None])[:, None, :]
            return np.concatenate([head, np.broadcast_to(np.eye(d - 1), (m, d - 1, d - 1))], axis=1)

        def to_params(p):
            return np.asarray(p)[:, 1:].ravel()
    return lifted, to_points, jacobian, to_params


def _chords(points, metric):
    g = (points * metric.weights) @ points.T
    diag = np.diag(g)
    return diag[:, None] + diag[None, :] - 2.0 * g


def global_rigidity_falsifier(framework: TensegrityFramework, config: PointConfiguration, trials: int,
                              seed: int = 0, noise=(0.05, 0.5), accept_tol=FEASIBILITY_TOL,
                              distortion_tol=DISTORTION_TOL) -> SearchReport:
    """Look for non-congruent reconfigurations one dimension up that respect every edge label.

    Each trial starts from a random congruent copy of the lifted
    configuration plus noise, then repairs label violations by least squares
    on the hinge residuals.  Samples whose worst violation falls below
    ``accept_tol * scale^2`` are accepted; the report records the largest
    pairwise chord distortion among them.
    """
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    if framework.k != 1:
        raise ValidationError("global rigidity concerns 1-frameworks (edges)")
    lifted, to_points, jacobian, to_params = _embed(config)
    metric = lifted.metric
    base = np.array(lifted.points)
    target = _chords(base, metric)
    scale2 = float(target.max())
    edges = framework.faces
    ii = np.array([e[0] for e in edges])
    jj = np.array([e[1] for e in edges])
    sign = np.array([1.0 if framework.labels[e] is Label.CABLE else -1.0 if framework.labels[e] is Label.STRUT
                     else 0.0 for e in edges])
    bars = sign == 0.0
    goal = target[ii, jj]

    m = config.m

    def residual(x):
        ch = _chords(to_points(x), metric)[ii, jj] - goal
        r = np.maximum(0.0, sign * ch)
        r[bars] = ch[bars]
        return r / scale2

    def residual_jac(x):
        p = to_points(x)
        jp = jacobian(x)
        q = jp.shape[2]
        ch = _chords(p, metric)[ii, jj] - goal
        active = (sign * ch > 0) | bars
        out = np.zeros((len(edges), m * q))
        for e, (i, j) in enumerate(edges):
            if not active[e]:
                continue
            g = 2.0 * (sign[e] if not bars[e] else 1.0) * metric.weights * (p[i] - p[j]) / scale2
            out[e, i * q:(i + 1) * q] += g @ jp[i]
            out[e, j * q:(j + 1) * q] -= g @ jp[j]
        return out

    report = SearchReport("global-rigidity", config.space.value, config.n, trials, seed,
                          max_distortion=0.0,
                          parameters={"accept_tol": accept_tol, "distortion_tol": distortion_tol,
                                      "noise": list(noise), "k": framework.k,
                                      "labels": {"-".join(str(i + 1) for i in e): framework.labels[e].value
                                                 for e in edges}})
    lo, hi = noise
    for t in range(trials):
        rng = trial_rng(seed, t)
        iso = random_isometry(metric, rng)
        start = iso(base)
        sigma = math.exp(rng.uniform(math.log(lo), math.log(hi))) * math.sqrt(scale2)
        x0 = to_params(start) + rng.normal(scale=sigma, size=to_params(start).shape)
        sol = least_squares(residual, x0, jac=residual_jac, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=5000)
        violation = float(np.abs(residual(sol.x)).max())
        if violation > accept_tol:
            continue
        report.accepted += 1
        pts = to_points(sol.x)
        distortion = float(np.abs(_chords(pts, metric) - target).max() / scale2)
        if distortion > report.max_distortion:
            report.max_distortion = distortion
        margin = -distortion
        if margin < report.min_margin:
            report.min_margin = margin
            report.min_margin_trial = t
        if distortion > distortion_tol:
            report.violations.append({"seed": seed, "trial": t, "distortion": distortion, "coordinates": pts})
    if report.accepted < trials:
        report.notes.append(f"{trials - report.accepted} trials did not reach a feasible configuration")
    return report


def dependence_normalization(config: PointConfiguration, dep: AffineDependence) -> np.ndarray:
    """``h_i = |alpha_i| / |opposite face|`` for every vertex; all equal when the dependence is exact.

    Opposite faces are measured by ``k! V_k`` in Euclidean space and by the
    O-prefixed norm in the curved models.  ``h > 0`` by construction.
    """
    m = config.m
    out = np.empty(m)
    for i in range(m):
        rest = [j for j in range(m) if j != i]
        pts = config.points[rest]
        if config.space is Space.EUCLIDEAN:
            rows = list(pts[1:] - pts[0])
            vol = math.sqrt(max(wedge_inner(rows, rows, config.metric), 0.0))
        else:
            vol = math.sqrt(abs(wedge_inner(list(pts), list(pts), config.metric)))
        out[i] = abs(dep.alpha[i]) / vol
    return out


__all__ = [
    "FlexReport",
    "MotionPath",
    "SignCheckReport",
    "Verdict",
    "dependence_normalization",
    "equality_residual",
    "face_gradient",
    "face_volume_derivative",
    "first_order_flex",
    "global_rigidity_falsifier",
    "inequality_sign_check",
    "mirror_dependence",
    "mirror_point",
    "path_equality_residuals",
    "reflect",
    "weighted_derivative_sum",
]
