import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import c_summation, circumcentre
from conftest import general_position_config, square_with_apex
from unyielding.dependence import affine_dependence
from unyielding.errors import InvalidDependence
from unyielding.geometry import MetricSignature, PointConfiguration
from unyielding.invariants import (
    Sphericity,
    c_direct,
    c_matrix,
    circumsphere_verdict,
    companion_roots,
    cosphericity,
    elementary_symmetric,
    generalized_charpoly,
    matrix_realization,
    perpendicularity_test,
    repeated_root_check,
    roots_and_signs,
)
from unyielding.sampling import random_orthogonal, trial_rng

E2 = MetricSignature.euclidean(2)


class TestSquare:
    def test_c_direct(self, square):
        dep = affine_dependence(square)
        o = np.zeros(2)
        assert c_direct(0, dep, square, o, o) == 1.0
        assert c_direct(1, dep, square, o, o) == pytest.approx(0.0, abs=1e-14)
        assert c_direct(2, dep, square, o, o) == pytest.approx(-4.0, abs=1e-13)

    def test_matrix_route(self, square):
        dep = affine_dependence(square)
        prof = c_matrix(dep, square)
        assert np.allclose(prof.c, [1, 0, -4], atol=1e-13)
        assert np.allclose(prof.charpoly, [1, 0, -4], atol=1e-13)
        real = matrix_realization(dep, square)
        assert np.allclose(real.symmetric_form, np.diag([2.0, -2.0]), atol=1e-13)

    def test_roots(self, square):
        dep = affine_dependence(square)
        roots, pos, neg = roots_and_signs(c_matrix(dep, square), dep)
        assert np.allclose(roots, [-2, 2], atol=1e-13)
        assert (pos, neg) == (1, 1)

    def test_centroid_signs(self):
        c = PointConfiguration(E2, [[0, 0], [3, 0], [0, 3], [1, 1]])
        dep = affine_dependence(c)
        prof = c_matrix(dep, c)
        _, pos, neg = roots_and_signs(prof, dep)
        assert (pos, neg) == (2, 0)
        assert prof.c[1] == pytest.approx(c_direct(1, dep, c), rel=1e-12)


class TestRoutes:
    def test_probe_independence_against_mp_oracle(self):
        for trial in range(30):
            rng = trial_rng(31, trial)
            n = 2 + trial % 3
            c = general_position_config(MetricSignature.euclidean(n), n + 2, 31, trial)
            dep = affine_dependence(c)
            P, Q = rng.normal(size=(2, n))
            for k in range(n + 1):
                ref = c_summation(k, dep.alpha, c.points, P, Q)
                assert c_direct(k, dep, c, P, Q) == pytest.approx(ref, rel=1e-9, abs=1e-12)

    def test_probes_in_higher_dimension(self):
        c = general_position_config(MetricSignature.euclidean(3), 5, 32, 0)
        dep = affine_dependence(c)
        rng = trial_rng(32, 1)
        P, Q = rng.normal(size=(2, 5))
        for k in range(4):
            assert c_direct(k, dep, c, P, Q) == pytest.approx(c_direct(k, dep, c), rel=1e-9, abs=1e-12)

    def test_repivot_invariance(self):
        for trial in range(20):
            n = 2 + trial % 3
            c = general_position_config(MetricSignature.euclidean(n), n + 2, 33, trial)
            dep = affine_dependence(c)
            base = c_matrix(dep, c).c
            for pivot in range(n + 2):
                assert np.allclose(c_matrix(dep, c, pivot=pivot).c, base, rtol=1e-9, atol=1e-12)

    def test_roots_reproduce_coefficients(self):
        for trial in range(30):
            n = 2 + trial % 3
            c = general_position_config(MetricSignature.euclidean(n), n + 2, 34, trial)
            dep = affine_dependence(c)
            prof = c_matrix(dep, c)
            e = elementary_symmetric(prof.roots)
            scale = max(1.0, np.abs(prof.c).max())
            assert np.allclose(e, prof.c, rtol=1e-7, atol=1e-7 * scale)


class TestCosphericity:
    def test_fixtures(self, square):
        v, c1 = cosphericity(affine_dependence(square), square)
        assert v is Sphericity.ON and abs(c1) < 1e-12
        for x, want in [(1.5, Sphericity.OUTSIDE), (0.5, Sphericity.INSIDE)]:
            c = square_with_apex(x)
            v, c1 = cosphericity(affine_dependence(c), c)
            assert v is want
            centre, r = circumcentre(c.points[1:])
            assert (np.linalg.norm(c.points[0] - centre) > r) == (want is Sphericity.OUTSIDE)

    def test_invariant_under_similarity(self):
        for trial in range(20):
            rng = trial_rng(35, trial)
            c = general_position_config(MetricSignature.euclidean(3), 5, 35, trial)
            v = cosphericity(affine_dependence(c), c)[0]
            moved = c.with_points(0.3 * c.points @ random_orthogonal(3, rng).T + 4.0)
            assert cosphericity(affine_dependence(moved), moved)[0] is v
            assert circumsphere_verdict(moved) is v


class TestOrthocentric:
    def test_fixture(self, orthocentric):
        dep = affine_dependence(orthocentric)
        assert perpendicularity_test(orthocentric)
        assert repeated_root_check(c_matrix(dep, orthocentric))

    def test_square(self, square):
        assert not perpendicularity_test(square)
        assert not repeated_root_check(c_matrix(affine_dependence(square), square))

    def test_perturbed(self, orthocentric):
        pts = orthocentric.points.copy()
        pts[3, 0] += 1e-2
        c = orthocentric.with_points(pts)
        assert not perpendicularity_test(c)
        assert not repeated_root_check(c_matrix(affine_dependence(c), c))


class TestGeneralized:
    def test_eigen_and_companion_routes(self):
        for trial in range(20):
            n = 2 + trial % 2
            c = general_position_config(MetricSignature.euclidean(n), n + 3, 36, trial)
            prof = generalized_charpoly(c)
            comp = np.sort(companion_roots(prof).real)
            assert np.allclose(comp, np.sort(prof.roots), rtol=1e-7, atol=1e-7 * np.abs(prof.roots).max())

    def test_zero_alpha_rejected(self):
        c = general_position_config(MetricSignature.euclidean(2), 5, 37, 0)
        with pytest.raises(InvalidDependence):
            generalized_charpoly(c, np.zeros(5))

    def test_duplicate_with_opposite_weights(self, square):
        dep = affine_dependence(square)
        extra = np.array([[0.3, -0.2]])
        big = PointConfiguration(E2, np.vstack([square.points, extra, extra]))
        alpha = np.r_[dep.alpha, 2.0, -2.0]
        got = generalized_charpoly(big, alpha)
        assert np.allclose(got.c, c_matrix(dep, square).c, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_sign_counts_property(seed):
    n = 2 + seed % 3
    c = general_position_config(MetricSignature.euclidean(n), n + 2, seed, 0)
    dep = affine_dependence(c)
    _, pos, neg = roots_and_signs(c_matrix(dep, c), dep)
    assert (pos, neg) == (dep.s - 1, n + 1 - dep.s)
