"""Curved-space volumes, the two-point function d(P, Q; B_1..B_k), curved c_k.

Points live on the unit sphere ``S^n`` in ``R^{n+1}`` or on the upper sheet
of the hyperboloid ``H^n`` in ``R^{n,1}``; ``kappa`` is +1 or -1.

``d(P, Q; B)`` is ``2 (k+1)! |O P Q B| dV_{k+1}/d(PQ^2)`` for the simplex
``P Q B_1..B_k``.  It is evaluated through an expansion over faces of that
simplex whose coefficients are ratios of wedge products, so only volumes of
(k-1)-faces are needed; closed forms for those exist up to dimension 2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .dependence import AffineDependence, affine_dependence
from .errors import (
    DegeneracyError,
    DegenerateSimplex,
    DimensionMismatch,
    SingularPair,
    UnsupportedDimension,
    ValidationError,
)
from .geometry import (
    MetricSignature,
    PointConfiguration,
    Space,
    bilinear_dot,
    chord_squared,
    geodesic_from_chord,
    gram,
    tangent_component,
    wedge_inner,
)
from .invariants import InvariantProfile
from .sampling import SearchReport, random_curved_points, trial_rng

MAX_EXACT_FACE_DIM = 2
MAX_EXACT_C = MAX_EXACT_FACE_DIM + 1
DEGENERATE_TOL = 1e-12
QUADRATURE_NODES = {1: 60, 2: 40, 3: 18}
REALNESS_TOL = 1e-12
PSD_TOL = 1e-10


def _metric_for(points, space: Space) -> MetricSignature:
    d = np.asarray(points).shape[-1]
    return MetricSignature(space, d - 1)


def _curved_space(metric) -> Space:
    space = metric.space if isinstance(metric, MetricSignature) else Space.parse(metric)
    if space is Space.EUCLIDEAN:
        raise ValidationError("this routine needs a spherical or hyperbolic metric")
    return space


def _kappa(space: Space) -> int:
    return 1 if space is Space.SPHERICAL else -1


def _stack(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2:
        raise DimensionMismatch("expected a stack of points")
    return pts


def o_wedge_square(points, space) -> float:
    """``(O X_1 ... X_j)^2`` for raw position vectors (empty stack gives 1)."""
    pts = list(_stack(points)) if len(points) else []
    if not pts:
        return 1.0
    m = _metric_for(pts, _curved_space(space))
    return wedge_inner(pts, pts, m)


def vertex_angle(apex, a, b, space) -> float:
    """Angle at ``apex`` between the geodesics towards ``a`` and ``b``."""
    space = _curved_space(space)
    m = _metric_for(apex, space)
    u = tangent_component(apex, a, m)
    v = tangent_component(apex, b, m)
    uu = bilinear_dot(u, u, m)
    vv = bilinear_dot(v, v, m)
    if uu <= 0 or vv <= 0:
        raise DegenerateSimplex("coincident vertices: no angle is defined")
    c = bilinear_dot(u, v, m) / math.sqrt(uu * vv)
    return math.acos(min(1.0, max(-1.0, c)))


def geodesic_distance(a, b, space) -> float:
    space = _curved_space(space)
    m = _metric_for(a, space)
    return geodesic_from_chord(chord_squared(a, b, m), m)


def _face_volume(points, space: Space) -> float:
    """``V_j`` of a j-simplex given by ``j + 1`` surface points, ``j <= 2``."""
    k = len(points) - 1
    if k == 0:
        return 1.0
    if k == 1:
        return geodesic_distance(points[0], points[1], space)
    if k == 2:
        a, b, c = points
        total = vertex_angle(a, b, c, space) + vertex_angle(b, c, a, space) + vertex_angle(c, a, b, space)
        return total - math.pi if space is Space.SPHERICAL else math.pi - total
    raise UnsupportedDimension(f"no closed-form volume for a {k}-simplex")


@dataclass(frozen=True)
class CurvedSimplexVolume:
    value: float
    k: int
    method: str
    stderr: float = 0.0


def _cone_integrand(pts, space, gammas):
    m = _metric_for(pts, space)
    k = len(pts) - 1
    G = gram(pts, pts, m)
    root = math.sqrt(abs(np.linalg.det(G)))
    y = gammas @ pts
    q = np.abs(np.einsum("ij,j,ij->i", y, m.weights, y))
    return root / q ** ((k + 1) / 2)


def _quadrature_volume(pts, space, nodes) -> float:
    # Duffy map from the unit cube onto the standard simplex
    k = len(pts) - 1
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    u = np.stack(np.meshgrid(*([x] * k), indexing="ij"), axis=-1).reshape(-1, k)
    wt = np.prod(np.stack(np.meshgrid(*([w] * k), indexing="ij"), axis=-1).reshape(-1, k), axis=1)
    gam = np.empty((u.shape[0], k + 1))
    rem = np.ones(u.shape[0])
    for j in range(k):
        gam[:, j] = rem * u[:, j]
        wt = wt * (1.0 - u[:, j]) ** (k - 1 - j)
        rem = rem * (1.0 - u[:, j])
    gam[:, k] = rem
    return float(np.sum(wt * _cone_integrand(pts, space, gam)))


def _monte_carlo_volume(pts, space, samples, rng):
    k = len(pts) - 1
    gam = rng.dirichlet(np.ones(k + 1), size=samples)
    f = _cone_integrand(pts, space, gam) / math.factorial(k)
    return float(f.mean()), float(f.std(ddof=1) / math.sqrt(samples))


def simplex_volume(points, space, method="exact", samples=200_000, rng=None) -> CurvedSimplexVolume:
    """Volume of the geodesic simplex spanned by the given surface points.

    ``method``: ``exact`` (dimension <= 2), ``quadrature`` (tensor Gauss
    rule on the cone over the simplex, dimension <= 3), ``monte-carlo``
    (any dimension, reports a standard error) or ``auto``.
    """
    space = _curved_space(space)
    pts = _stack(points)
    k = len(pts) - 1
    if method == "auto":
        method = "exact" if k <= MAX_EXACT_FACE_DIM else "quadrature"
    if method == "exact":
        return CurvedSimplexVolume(_face_volume(list(pts), space), k, "exact")
    if k == 0:
        return CurvedSimplexVolume(1.0, 0, method)
    if method == "quadrature":
        if k not in QUADRATURE_NODES:
            raise UnsupportedDimension(f"quadrature is provided up to dimension 3, got {k}")
        return CurvedSimplexVolume(_quadrature_volume(pts, space, QUADRATURE_NODES[k]), k, "quadrature")
    if method == "monte-carlo":
        rng = np.random.default_rng(0) if rng is None else rng
        value, err = _monte_carlo_volume(pts, space, samples, rng)
        return CurvedSimplexVolume(value, k, "monte-carlo", err)
    raise ValidationError(f"unknown volume method {method!r}")


def curved_volume(indices, config: PointConfiguration, method="exact", **kw) -> CurvedSimplexVolume:
    if not config.metric.curved:
        raise ValidationError("curved_volume needs a spherical or hyperbolic configuration")
    return simplex_volume(config.points[list(indices)], config.space, method, **kw)


def dihedral_angles(points, space) -> dict:
    """Dihedral angle of a 3-simplex at each edge ``(a, b)``, 0-based vertex pairs."""
    space = _curved_space(space)
    pts = _stack(points)
    if len(pts) != 4:
        raise ValidationError("dihedral angles need a 3-simplex")
    m = _metric_for(pts, space)
    out = {}
    for a, b in itertools.combinations(range(4), 2):
        c, d = [i for i in range(4) if i not in (a, b)]
        edge = pts[[a, b]]
        G = gram(edge, edge, m)
        inv = np.linalg.inv(G)

        def perp(x):
            return x - (inv @ gram(edge, [x], m)[:, 0]) @ edge

        u, v = perp(pts[c]), perp(pts[d])
        cos = bilinear_dot(u, v, m) / math.sqrt(bilinear_dot(u, u, m) * bilinear_dot(v, v, m))
        out[(a, b)] = math.acos(min(1.0, max(-1.0, cos)))
    return out


def simplex_angles(points, space) -> dict:
    """Angles at the codimension-2 faces: vertex angles of a triangle, dihedral angles of a tetrahedron."""
    pts = _stack(points)
    if len(pts) == 3:
        return {i: vertex_angle(pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3], space) for i in range(3)}
    return dihedral_angles(pts, space)


def schlafli_rate(points, angle_rates, space) -> float:
    """Volume rate ``dV_k = kappa / (k - 1) * sum_F V_{k-2}(F) dtheta_F`` for ``k`` in ``{2, 3}``.

    ``angle_rates`` maps each codimension-2 face (a vertex index for
    triangles, an edge pair for tetrahedra) to the rate of its angle.
    """
    space = _curved_space(space)
    pts = _stack(points)
    k = len(pts) - 1
    if k not in (2, 3):
        raise UnsupportedDimension("the differential volume formula is provided for triangles and tetrahedra")
    total = 0.0
    for face, rate in angle_rates.items():
        idx = [face] if k == 2 else list(face)
        total += _face_volume(list(pts[idx]), space) * rate
    return _kappa(space) * total / (k - 1)


def bracket(Q, i, simplex, space) -> float:
    """``<Q | P_i ; P_1 .. P_j>``: coefficient of ``P_i`` when ``Q`` is projected onto their span."""
    space = _curved_space(space)
    S = list(_stack(simplex))
    m = _metric_for(S, space)
    den = wedge_inner(S, S, m)
    if abs(den) < DEGENERATE_TOL:
        raise DegenerateSimplex("bracket over a degenerate simplex")
    num = wedge_inner([np.asarray(Q, dtype=float)] + S[:i] + S[i + 1:], S, m)
    return (-1) ** i * num / den


def _without(seq, *drop):
    return [x for j, x in enumerate(seq) if j not in drop]


def d_pair(P, Q, B, space) -> float:
    """``d(P, Q; B_1..B_k)`` for ``k <= 3`` via the face expansion.

    The terms are: ``F = B`` with weight 1; ``F = {X} + B - B_i`` for
    ``X`` in ``{P, Q}`` with weight ``-<B_i|X; X, Y, B - B_i>``; and
    ``F = {P, Q} + B - {B_i, B_j}`` with weight
    ``<B_i|P; P,Q,B-B_i><B_j|Q; P,Q,B-B_i-B_j> + (i <-> j)``.
    The sum is scaled by ``kappa (k+1) (k-1)!``.
    """
    space = _curved_space(space)
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    B = [np.asarray(b, dtype=float) for b in B]
    k = len(B)
    if k == 0:
        return 1.0
    if k - 1 > MAX_EXACT_FACE_DIM:
        raise UnsupportedDimension(f"d(P, Q; B) needs face volumes of dimension {k - 1}; exact only up to 2")
    if len(Q) != len(P) or any(len(b) != len(P) for b in B):
        raise DimensionMismatch("P, Q and the B points must share one ambient dimension")
    full = [P, Q] + B
    if len(P) < k + 2:
        raise DimensionMismatch(f"P, Q and {k} further points need at least {k + 2} coordinates")
    if abs(o_wedge_square(full, space)) < DEGENERATE_TOL:
        raise DegenerateSimplex("P, Q and the B points are linearly dependent")

    def term(face):
        return math.sqrt(abs(o_wedge_square(face, space))) * _face_volume(face, space)

    total = term(B)
    for i in range(k):
        rest = _without(B, i)
        for X, Y in ((P, Q), (Q, P)):
            total -= bracket(B[i], 0, [X, Y] + rest, space) * term([X] + rest)
    for i, j in itertools.combinations(range(k), 2):
        rest = _without(B, i, j)
        g = bracket(B[i], 0, [P, Q] + _without(B, i), space) * bracket(B[j], 1, [P, Q] + rest, space)
        g += bracket(B[j], 0, [P, Q] + _without(B, j), space) * bracket(B[i], 1, [P, Q] + rest, space)
        total += g * term([P, Q] + rest)
    return _kappa(space) * (k + 1) * math.factorial(k - 1) * total


def d_closed_form(P, Q, A, space) -> float:
    """``d(P, Q; A) = 2 (A - P).(A - Q) / (1 + cos PQ)`` (``cosh`` in ``H^n``).

    Unlike :func:`d_pair` this is valid for ``P = Q`` as well.
    """
    space = _curved_space(space)
    P, Q, A = (np.asarray(x, dtype=float) for x in (P, Q, A))
    m = _metric_for(P, space)
    cos_pq = _kappa(space) * bilinear_dot(P, Q, m)
    if 1.0 + cos_pq <= DEGENERATE_TOL:
        raise DegenerateSimplex("P and Q are antipodal")
    return 2.0 * bilinear_dot(A - P, A - Q, m) / (1.0 + cos_pq)


def _require_curved(config):
    if not config.metric.curved:
        raise ValidationError("curved invariants need a spherical or hyperbolic configuration")


def curved_c(k: int, dep: AffineDependence, config: PointConfiguration) -> float:
    """``c_k = kappa (k+1) (k-1)! sum_I alpha_I |O A_I| V_{k-1}(A_I)``; ``c_0 = 1``."""
    _require_curved(config)
    if k == 0:
        return 1.0
    if k < 0 or k > config.m - 1:
        raise ValidationError(f"k={k} out of range")
    if k > MAX_EXACT_C:
        raise UnsupportedDimension(f"c_{k} needs {k - 1}-dimensional curved volumes; exact only up to c_3")
    pts = config.points
    a = dep.alpha
    total = 0.0
    for face in itertools.combinations(range(config.m), k):
        idx = list(face)
        total += float(np.prod(a[idx])) * math.sqrt(abs(o_wedge_square(pts[idx], config.space))) * _face_volume(
            list(pts[idx]), config.space
        )
    return _kappa(config.space) * (k + 1) * math.factorial(k - 1) * total


def curved_c_probe(k: int, dep: AffineDependence, config: PointConfiguration, P, Q) -> float:
    """``c_k = sum_I alpha_I d(P, Q; A_I)`` for probes in a model space of higher dimension."""
    _require_curved(config)
    P = np.asarray(P, dtype=float)
    d = config.metric.ambient_dim
    extra = len(P) - d
    if extra < 0:
        raise DimensionMismatch("probe points need at least as many coordinates as the configuration")
    pts = np.hstack([config.points, np.zeros((config.m, extra))])
    if k == 0:
        return 1.0
    total = 0.0
    for face in itertools.combinations(range(config.m), k):
        total += dep.product(face) * d_pair(P, Q, list(pts[list(face)]), config.space)
    return total


def normalized_discriminant(poly) -> float:
    """Discriminant of a polynomial of degree <= 3 divided by the sum of its terms' magnitudes.

    Positive for distinct real roots, negative when a complex pair exists.
    """
    p = np.asarray(poly, dtype=float)
    deg = len(p) - 1
    if deg <= 1:
        return 1.0
    if deg == 2:
        a, b, c = p
        terms = [b * b, -4 * a * c]
    elif deg == 3:
        a, b, c, d = p
        terms = [18 * a * b * c * d, -4 * b**3 * d, b * b * c * c, -4 * a * c**3, -27 * a * a * d * d]
    else:
        raise UnsupportedDimension("discriminant margin is provided up to degree 3")
    scale = sum(abs(t) for t in terms)
    return float(sum(terms) / scale) if scale else 0.0


@dataclass(frozen=True, eq=False)
class CurvedProfile:
    """Curved ``c`` vector, the roots of ``f`` and a realness verdict."""

    profile: InvariantProfile
    real: bool | None
    margin: float | None

    @property
    def c(self):
        return self.profile.c

    @property
    def roots(self):
        return self.profile.roots


def curved_charpoly(dep: AffineDependence, config: PointConfiguration, strict=False) -> CurvedProfile:
    """``c_0..c_n`` in ``S^n`` / ``H^n``; coefficients past ``c_3`` are NaN (or raise when ``strict``)."""
    _require_curved(config)
    n = config.n
    if strict and n > MAX_EXACT_C:
        raise UnsupportedDimension(f"c_4..c_{n} are not available in closed form")
    c = [curved_c(k, dep, config) if k <= MAX_EXACT_C else math.nan for k in range(n + 1)]
    prof = InvariantProfile(c=c, alpha=dep.alpha, route="curved")
    if not np.all(np.isfinite(c)):
        return CurvedProfile(prof, None, None)
    roots = np.roots(prof.charpoly)
    scale = max(float(np.abs(roots).max()), 1e-300)
    real = bool(np.all(np.abs(roots.imag) <= 1e-9 * scale))
    margin = normalized_discriminant(prof.charpoly)
    if real:
        roots = roots.real
    prof = InvariantProfile(c=c, roots=roots, alpha=dep.alpha, route="curved")
    return CurvedProfile(prof, real, margin)


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """``K_ij = d(P_i, P_j; A)`` for points ``P_i`` and a base point ``A``."""

    base: np.ndarray
    points: np.ndarray
    entries: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries).min())

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.entries))

    def is_psd(self, tol=PSD_TOL) -> bool:
        scale = max(float(np.abs(self.entries).max()), 1e-300)
        return self.min_eigenvalue >= -tol * scale


def kernel_matrix(base, points, space) -> KernelMatrix:
    space = _curved_space(space)
    A = np.asarray(base, dtype=float)
    pts = _stack(points)
    k = len(pts)
    K = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            K[i, j] = K[j, i] = d_closed_form(pts[i], pts[j], A, space)
    return KernelMatrix(A, pts, K)


def h1_point(r: float) -> np.ndarray:
    return np.array([math.cosh(r), math.sinh(r)])


def h1_kernel(rs, base=0.0) -> KernelMatrix:
    """Kernel on ``H^1`` for points at arclength ``rs`` about the point at arclength ``base``."""
    return kernel_matrix(h1_point(base), [h1_point(r) for r in rs], Space.HYPERBOLIC)


def h1_kernel_entry(ri: float, rj: float) -> float:
    """``4 sinh(r_i/2) sinh(r_j/2) / cosh((r_i - r_j)/2)``."""
    return 4.0 * math.sinh(0.5 * ri) * math.sinh(0.5 * rj) / math.cosh(0.5 * (ri - rj))


def cauchy_determinant(x, y) -> float:
    """``det(1/(x_i + y_j))`` by the product formula."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatch("Cauchy determinant needs equally many x and y")
    sums = x[:, None] + y[None, :]
    scale = max(float(np.abs(sums).max()), 1e-300)
    if np.any(np.abs(sums) <= 1e-15 * scale):
        i, j = np.argwhere(np.abs(sums) <= 1e-15 * scale)[0]
        raise SingularPair(f"x_{i + 1} + y_{j + 1} = 0")
    num = 1.0
    for i, j in itertools.combinations(range(len(x)), 2):
        num *= (x[j] - x[i]) * (y[j] - y[i])
    return float(num / np.prod(sums))


def h1_kernel_determinant(rs, base=0.0) -> float:
    """``det K = 2^k prod(e^{r_i} - 1)^2 det(1/(e^{r_i} + e^{r_j}))`` with ``r_i`` measured from ``base``."""
    e = np.exp(np.asarray(rs, dtype=float) - base)
    if np.any(e == 1.0):
        return 0.0
    return float(2.0 ** len(e) * np.prod((e - 1.0) ** 2) * cauchy_determinant(e, e))


SEARCH_KINDS = ("real-roots", "kernel-psd")


def search_trial(kind, space, dim, points, seed, trial):
    """Regenerate one trial: returns ``(coordinates, margin)``; margin ``None`` when degenerate."""
    space = _curved_space(space)
    metric = MetricSignature(space, dim)
    rng = trial_rng(seed, trial)
    if kind == "real-roots":
        if dim > MAX_EXACT_C:
            raise UnsupportedDimension(f"real-roots search needs c_1..c_{dim}; exact only up to dimension 3")
        pts = random_curved_points(metric, dim + 2, rng)
        try:
            config = PointConfiguration(metric, pts)
            prof = curved_charpoly(affine_dependence(config), config)
        except DegeneracyError:
            return pts, None
        return pts, prof.margin
    if kind == "kernel-psd":
        if space is not Space.HYPERBOLIC:
            raise ValidationError("kernel-psd search is posed in hyperbolic space")
        pts = random_curved_points(metric, points + 1, rng)
        try:
            K = kernel_matrix(pts[0], pts[1:], space)
        except DegeneracyError:
            return pts, None
        scale = max(float(np.abs(K.entries).max()), 1e-300)
        return pts, K.min_eigenvalue / scale
    raise ValidationError(f"unknown search kind {kind!r}")


def conjecture_search(kind, trials, seed=0, dim=2, points=3, space=Space.HYPERBOLIC, tol=None) -> SearchReport:
    """Randomized search for counterexamples; a clean report is evidence, not proof.

    ``real-roots``: margin is the normalised discriminant of the curved
    characteristic polynomial of ``dim + 2`` random points.  ``kernel-psd``:
    margin is the smallest eigenvalue of the kernel of ``points`` random
    points about a random base, relative to the largest entry.
    """
    space = _curved_space(space)
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    if kind not in SEARCH_KINDS:
        raise ValidationError(f"unknown search kind {kind!r}")
    tol = (REALNESS_TOL if kind == "real-roots" else PSD_TOL) if tol is None else tol
    report = SearchReport(kind, space.value, dim, trials, seed, parameters={"points": points, "tol": tol})
    skipped = 0
    for t in range(trials):
        pts, margin = search_trial(kind, space, dim, points, seed, t)
        if margin is None:
            skipped += 1
            continue
        report.accepted += 1
        if margin < report.min_margin:
            report.min_margin = margin
            report.min_margin_trial = t
        if margin < -tol:
            report.violations.append({"seed": seed, "trial": t, "margin": margin, "coordinates": pts})
    if skipped:
        report.notes.append(f"{skipped} degenerate trials skipped")
    return report


def verify_violation(report: SearchReport, violation: dict) -> bool:
    """Re-run a reported violation from its seed and trial and confirm it."""
    pts, margin = search_trial(
        report.kind, report.space, report.dim, report.parameters["points"], violation["seed"], violation["trial"]
    )
    tol = report.parameters["tol"]
    return margin is not None and margin < -tol and np.allclose(pts, violation["coordinates"])
