"""Reference computations that share no code with the package.

Each oracle uses a different route from the library: exact rational
arithmetic, high-precision mpmath, direct quadrature of the volume
integral, side-length area formulas, or plain finite differences.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import sympy

mpmath.mp.dps = 40


def weights(kind: str, d: int) -> np.ndarray:
    w = np.ones(d)
    if kind == "h":
        w[0] = -1.0
    return w


def mdot(u, v, kind):
    return float(np.sum(np.asarray(u) * np.asarray(v) * weights(kind, len(u))))


def exact_alpha(points) -> list:
    """Affine dependence of rational points by exact null-space, scaled so alpha_1 = 1."""
    rows = [[sympy.Rational(Fraction(x).limit_denominator(10**12)) for x in p] for p in points]
    m = len(rows)
    mat = sympy.Matrix([[1] * m] + [[rows[i][j] for i in range(m)] for j in range(len(rows[0]))])
    (vec,) = mat.nullspace()
    vec = vec / vec[0]
    return [float(x) for x in vec]


def laplace_det(g):
    """Cofactor expansion; fine for the small sizes used here and free of pivoting."""
    if len(g) == 1:
        return g[0][0]
    return sum((-1) ** j * g[0][j] * laplace_det([row[:j] + row[j + 1:] for row in g[1:]])
               for j in range(len(g)) if g[0][j] != 0)


def c_summation(k, alpha, points, P, Q) -> float:
    """c_k as the probe-point sum, with every wedge product evaluated in mpmath."""
    if k == 0:
        return 1.0
    def vec(v):
        return [mpmath.mpf(float(x)) for x in v]

    pts = [vec(p) for p in points]
    P, Q = vec(P), vec(Q)
    total = mpmath.mpf(0)
    for idx in itertools.combinations(range(len(pts)), k):
        r = [[a - b for a, b in zip(pts[i], P)] for i in idx]
        s = [[a - b for a, b in zip(pts[i], Q)] for i in idx]
        g = [[sum(x * y for x, y in zip(ra, sb)) for sb in s] for ra in r]
        prod = mpmath.mpf(1)
        for i in idx:
            prod *= float(alpha[i])
        total += prod * laplace_det(g)
    return float(total)


def circumcentre(points):
    """Centre and radius of the sphere through n + 1 points, by mpmath linear solve."""
    pts = [list(map(mpmath.mpf, map(float, p))) for p in points]
    n = len(pts[0])
    a = mpmath.matrix(n, n)
    b = mpmath.matrix(n, 1)
    for r in range(n):
        for c in range(n):
            a[r, c] = 2 * (pts[r + 1][c] - pts[0][c])
        b[r] = sum(pts[r + 1][c] ** 2 - pts[0][c] ** 2 for c in range(n))
    x = mpmath.lu_solve(a, b)
    centre = np.array([float(v) for v in x])
    radius = float(mpmath.sqrt(sum((pts[0][c] - x[c]) ** 2 for c in range(n))))
    return centre, radius


def mp_det(mat) -> float:
    return float(mpmath.det(mpmath.matrix([[mpmath.mpf(float(v)) for v in row] for row in mat])))


def cauchy_direct(x, y) -> float:
    """det(1 / (x_i + y_j)) evaluated entrywise in mpmath."""
    return float(mpmath.det(mpmath.matrix([[1 / (mpmath.mpf(a) + mpmath.mpf(b)) for b in y] for a in x])))


def h1_kernel_mp(rs, base=0.0):
    """H^1 kernel in mpmath from the two-point product formula."""
    out = []
    for ri in rs:
        row = []
        for rj in rs:
            a = mpmath.mpf(ri) - base
            b = mpmath.mpf(rj) - base
            row.append(4 * mpmath.sinh(a / 2) * mpmath.sinh(b / 2) / mpmath.cosh((a - b) / 2))
        out.append(row)
    return mpmath.matrix(out)


def geodesic(a, b, kind) -> float:
    c = mdot(a, b, kind)
    if kind == "s":
        return math.acos(max(-1.0, min(1.0, c)))
    return math.acosh(max(1.0, -c))


def triangle_area(a, b, c, kind) -> float:
    """Curved triangle area from side lengths alone (L'Huilier and its hyperbolic analogue)."""
    x, y, z = geodesic(b, c, kind), geodesic(a, c, kind), geodesic(a, b, kind)
    s = (x + y + z) / 2
    if kind == "s":
        t = math.tan(s / 2) * math.tan((s - x) / 2) * math.tan((s - y) / 2) * math.tan((s - z) / 2)
    else:
        t = math.tanh(s / 2) * math.tanh((s - x) / 2) * math.tanh((s - y) / 2) * math.tanh((s - z) / 2)
    return 4 * math.atan(math.sqrt(max(t, 0.0)))


def quad_volume(X, kind, nodes=40) -> float:
    """Curved simplex volume as the cone integral |det G|^(1/2) / |y|^(k+1) over the standard simplex."""
    X = np.asarray(X, dtype=float)
    k = X.shape[0] - 1
    x, wt = np.polynomial.legendre.leggauss(nodes)
    x = (x + 1) / 2
    wt = wt / 2
    grids = np.meshgrid(*([x] * k), indexing="ij")
    W = np.ones_like(grids[0])
    for g in np.meshgrid(*([wt] * k), indexing="ij"):
        W = W * g
    for j in range(k):
        W = W * (1 - grids[j]) ** (k - 1 - j)
    gam = []
    rem = np.ones_like(grids[0])
    for j in range(k):
        gam.append(rem * grids[j])
        rem = rem * (1 - grids[j])
    gam.append(rem)
    Y = sum(gam[i][..., None] * X[i] for i in range(k + 1))
    w = weights(kind, X.shape[1])
    q = np.sum(Y * Y * w, axis=-1)
    if kind == "h":
        q = -q
    G = X @ np.diag(w) @ X.T
    return float(np.sum(W * math.sqrt(abs(np.linalg.det(G))) / q ** ((k + 1) / 2)))


def from_gram(G, kind):
    """Points realizing a Gram matrix (Euclidean or Minkowski)."""
    if kind == "s":
        return np.linalg.cholesky(G)
    lam, U = np.linalg.eigh(G)
    order = np.argsort(lam)
    X = U[:, order] * np.sqrt(np.abs(lam[order]))
    if X[0, 0] < 0:
        X = -X
    return X


def d_finite_difference(P, Q, B, kind, nodes=40, h=1e-5) -> float:
    """2 (k+1)! |O P Q B..| dV_{k+1} / d(chord^2 PQ), by perturbing the Gram entry."""
    X = np.array([P, Q] + list(B))
    w = weights(kind, X.shape[1])
    G = X @ np.diag(w) @ X.T
    k = len(B)

    def V(delta):
        G2 = G.copy()
        G2[0, 1] -= delta / 2
        G2[1, 0] -= delta / 2
        return quad_volume(from_gram(G2, kind), kind, nodes)

    der = (V(h) - V(-h)) / (2 * h)
    return 2 * math.factorial(k + 1) * math.sqrt(abs(np.linalg.det(G))) * der


def curved_points(kind, m, d, rng, radius=0.6):
    """Random points near the base point of S^(d-1) or H^(d-1), by explicit cos/sin or cosh/sinh."""
    out = []
    for _ in range(m):
        v = rng.normal(size=d - 1) * radius
        r = float(np.linalg.norm(v))
        u = v / r
        if kind == "s":
            out.append(np.r_[math.sin(r) * u, math.cos(r)])
        else:
            out.append(np.r_[math.cosh(r), math.sinh(r) * u])
    return np.array(out)


def relative(a, b, floor=1e-300) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), floor))
