import math

import numpy as np
import pytest

import oracles
from conftest import general_position_config, square_with_apex
from unyielding.dependence import Flavor, Label, TensegrityFramework, affine_dependence, build_framework
from unyielding.errors import DegeneracyError, DegenerateHyperplane, SignalTooSmall, TangencyViolation, ValidationError
from unyielding.flex import (
    MotionPath,
    Verdict,
    dependence_normalization,
    equality_residual,
    face_volume_derivative,
    first_order_flex,
    global_rigidity_falsifier,
    inequality_sign_check,
    mirror_dependence,
    mirror_point,
    path_equality_residuals,
)
from unyielding.geometry import MetricSignature, PointConfiguration, Space, squared_simplex_volume, tangent_component
from unyielding.sampling import random_orthogonal, trial_rng

E2 = MetricSignature.euclidean(2)


def curved_config(space, n, m, seed, trial):
    kind = "s" if space is Space.SPHERICAL else "h"
    return PointConfiguration(MetricSignature(space, n), oracles.curved_points(kind, m, n + 1, trial_rng(seed, trial)))


def tangent_velocities(config, rng):
    return np.array([tangent_component(p, rng.normal(size=len(p)), config.metric) for p in config.points])


class TestFaceDerivative:
    def test_translation(self, square):
        v = np.tile([0.3, -1.2], (4, 1))
        for face in [(0, 1), (0, 1, 2), (1, 2, 3)]:
            assert face_volume_derivative(face, v, square) == pytest.approx(0.0, abs=1e-14)

    def test_rotation(self, square):
        v = square.points @ np.array([[0, -1], [1, 0]]).T
        for face in [(0, 2), (0, 1, 3)]:
            assert face_volume_derivative(face, v, square) == pytest.approx(0.0, abs=1e-14)

    def test_finite_difference(self, square):
        v = np.zeros((4, 2))
        v[0] = [1.0, 0.0]
        h = 1e-6
        plus = square.with_points(square.points + h * v)
        minus = square.with_points(square.points - h * v)
        fd = (squared_simplex_volume((0, 1, 2), plus) - squared_simplex_volume((0, 1, 2), minus)) / (2 * h)
        assert face_volume_derivative((0, 1, 2), v, square) == pytest.approx(fd, rel=1e-6)

    @pytest.mark.parametrize("space", [Space.SPHERICAL, Space.HYPERBOLIC])
    def test_curved_finite_difference(self, space):
        from unyielding.curved import curved_volume
        from unyielding.geometry import exp_map

        c = curved_config(space, 2, 3, 61, 0)
        v = tangent_velocities(c, trial_rng(61, 1))
        h = 1e-6

        def moved(s):
            return c.with_points(np.array([exp_map(p, s * w, c.metric) for p, w in zip(c.points, v)]))

        fd = (curved_volume((0, 1, 2), moved(h)).value - curved_volume((0, 1, 2), moved(-h)).value) / (2 * h)
        assert face_volume_derivative((0, 1, 2), v, c) == pytest.approx(fd, rel=1e-6)

    def test_tangency_enforced(self):
        c = curved_config(Space.HYPERBOLIC, 2, 3, 62, 0)
        with pytest.raises(TangencyViolation):
            face_volume_derivative((0, 1), np.ones((3, 3)), c)


class TestEquality:
    @pytest.mark.parametrize("k", [1, 2])
    def test_square(self, square, k):
        for trial in range(20):
            v = trial_rng(63, trial).normal(size=(4, 2))
            assert abs(equality_residual(square, v, k)) < 1e-8

    def test_hyperbolic_quadruple(self):
        c = curved_config(Space.HYPERBOLIC, 2, 4, 64, 0)
        for trial in range(20):
            v = tangent_velocities(c, trial_rng(64, trial))
            assert abs(equality_residual(c, v, 1)) < 1e-7

    def test_path_residuals(self, square):
        coeff = trial_rng(65, 0).normal(size=(4, 3, 2))
        path = MotionPath.polynomial(square, coeff)
        assert max(abs(r) for r in path_equality_residuals(path, 2, [0.0, 0.05, 0.1])) < 1e-8


class TestMotionPath:
    def test_base_reproduced(self, square):
        path = MotionPath.polynomial(square, np.ones((4, 2, 2)))
        assert np.array_equal(path.positions(0.0), square.points)

    def test_degree_cap(self, square):
        with pytest.raises(ValidationError):
            MotionPath.polynomial(square, np.ones((4, 5, 2)))

    def test_curved_on_surface(self):
        c = curved_config(Space.HYPERBOLIC, 2, 4, 66, 0)
        path = MotionPath.polynomial(c, 0.05 * trial_rng(66, 1).normal(size=(4, 3, 3)))
        for t in [0.01, 0.3, 1.0]:
            assert path.surface_residual(t) < 1e-10

    def test_leaving_the_hyperboloid_cone(self):
        c = curved_config(Space.HYPERBOLIC, 2, 4, 66, 0)
        coeff = np.zeros((4, 1, 3))
        coeff[0, 0] = [0.0, 5.0, 0.0]
        with pytest.raises(DegeneracyError):
            MotionPath.polynomial(c, coeff).positions(1.0)

    def test_velocity_matches_difference(self):
        c = curved_config(Space.SPHERICAL, 2, 4, 67, 0)
        path = MotionPath.polynomial(c, trial_rng(67, 1).normal(size=(4, 2, 3)))
        h = 1e-6
        fd = (path.positions(0.2 + h) - path.positions(0.2 - h)) / (2 * h)
        assert np.allclose(path.velocities(0.2), fd, atol=1e-8)


class TestMirror:
    def test_reflection_through_plane(self):
        c = PointConfiguration(MetricSignature.euclidean(3), [[0, 0, 1], [1, 0, 0], [0, 1, 0], [-1, -1, 0]])
        assert np.allclose(mirror_point(c), [0, 0, -1], atol=1e-14)

    def test_fixed_point(self, square):
        lifted = square.lifted(1)
        assert np.allclose(mirror_point(lifted), lifted.points[0], atol=1e-14)

    def test_involution(self):
        c = PointConfiguration(MetricSignature.euclidean(3), [[0.2, 0.4, 0.9], [1, 0, 0.1], [0, 1, -0.2], [-1, -1, 0]])
        once = mirror_point(c)
        twice = mirror_point(c.with_points(np.vstack([once, c.points[1:]])))
        assert np.allclose(twice, c.points[0], atol=1e-12)

    def test_sphere(self):
        c = PointConfiguration(MetricSignature.spherical(2), [[0.3, 0.4, math.sqrt(0.75)], [1, 0, 0], [0, 1, 0]])
        out = mirror_point(c)
        assert float(out @ out) == pytest.approx(1.0, abs=1e-14)
        assert np.allclose(out, [0.3, 0.4, -math.sqrt(0.75)], atol=1e-14)

    def test_degenerate(self):
        c = PointConfiguration(MetricSignature.euclidean(3), [[0, 0, 1], [1, 0, 0], [2, 0, 0], [3, 0, 0]])
        with pytest.raises(DegenerateHyperplane):
            mirror_point(c)

    def test_mirror_dependence_in_plane(self, square):
        assert np.allclose(mirror_dependence(square.lifted(1)), affine_dependence(square).alpha, atol=1e-12)


class TestSignCheck:
    @pytest.mark.parametrize("x,expected", [(0.5, 1), (1.5, -1)])
    def test_square_variants(self, x, expected):
        c = square_with_apex(x)
        dep = affine_dependence(c)
        rep = inequality_sign_check(dep, c, MotionPath.lift(c, 0), 2)
        assert rep.predicted_sign == expected
        assert rep.signs_agree
        assert all(np.sign(r["weighted_sum"]) == expected for r in rep.rows)
        assert rep.final_ratio == pytest.approx(1.0, abs=0.05)

    def test_cospherical_is_too_small(self, square):
        with pytest.raises(SignalTooSmall):
            inequality_sign_check(affine_dependence(square), square, MotionPath.lift(square, 0), 2)

    def test_in_plane_path(self):
        c = square_with_apex(0.5)
        v = trial_rng(68, 0).normal(size=(4, 2))
        path = MotionPath.lift(c, 0, speed=0.0, in_space=v)
        rep = inequality_sign_check(affine_dependence(c), c, path, 2)
        assert rep.in_space
        assert rep.max_residual < 1e-8

    @pytest.mark.parametrize("space", [Space.SPHERICAL, Space.HYPERBOLIC])
    def test_curved(self, space):
        c = curved_config(space, 2, 4, 69, 0)
        dep = affine_dependence(c)
        for k in (1, 2):
            rep = inequality_sign_check(dep, c, MotionPath.lift(c, 0), k)
            assert rep.signs_agree
            assert rep.final_ratio == pytest.approx(1.0, abs=0.05)


class TestFirstOrder:
    def test_square_g2(self, square):
        fw = build_framework(affine_dependence(square), 2, Flavor.G)
        rep = first_order_flex(fw, square, 2)
        assert rep.verdict is Verdict.FIRST_ORDER_UNYIELDING and rep.optimum < 1e-8

    def test_square_f1(self, square):
        fw = build_framework(affine_dependence(square), 1, Flavor.F)
        assert first_order_flex(fw, square, 2).verdict is Verdict.FIRST_ORDER_UNYIELDING

    def test_single_strut(self):
        c = PointConfiguration(MetricSignature.euclidean(1), [[0.0], [1.0]])
        fw = TensegrityFramework(1, 2, {(0, 1): Label.STRUT}, Flavor.CUSTOM)
        rep = first_order_flex(fw, c, 1)
        assert rep.verdict is Verdict.FLEX_FOUND
        assert rep.face_derivatives[(0, 1)] > 0
        assert rep.max_violation <= 1e-12

    def test_witness_respects_labels(self, square):
        # all cables in the plane can shrink together
        fw = build_framework(affine_dependence(square), 1, Flavor.ALL_CABLE)
        rep = first_order_flex(fw, square, 2)
        assert rep.verdict is Verdict.FLEX_FOUND
        assert all(v <= 1e-12 for v in rep.face_derivatives.values())
        assert min(rep.face_derivatives.values()) < -1e-8

    def test_invariant_under_rigid_motion_and_relabelling(self):
        c = general_position_config(MetricSignature.euclidean(3), 5, 70, 0)
        dep = affine_dependence(c)
        q = random_orthogonal(3, trial_rng(70, 1))
        moved = c.with_points(c.points @ q.T + 1.0)
        perm = [2, 0, 4, 1, 3]
        shuffled = c.with_points(c.points[perm])
        for k in (1, 2):
            fw = build_framework(dep, k, Flavor.G)
            base = first_order_flex(fw, c, 3).verdict
            assert first_order_flex(fw, moved, 3).verdict is base
            fw2 = build_framework(affine_dependence(shuffled), k, Flavor.G)
            assert first_order_flex(fw2, shuffled, 3).verdict is base

    def test_ambient_checked(self, square):
        fw = build_framework(affine_dependence(square), 1, Flavor.G)
        with pytest.raises(ValidationError):
            first_order_flex(fw, square, 5)


class TestFalsifier:
    def test_square_lifted(self, square):
        fw = build_framework(affine_dependence(square), 1, Flavor.G)
        rep = global_rigidity_falsifier(fw, square, 30, seed=1)
        assert rep.accepted >= 25
        assert rep.max_distortion < 1e-6 and rep.holds

    def test_flipped_label(self, square):
        fw = build_framework(affine_dependence(square), 1, Flavor.G)
        flipped = fw.with_label((0, 1), fw.labels[(0, 1)].opposite)
        rep = global_rigidity_falsifier(flipped, square, 30, seed=1)
        assert rep.max_distortion > 1e-2 and not rep.holds

    def test_rejects_faces(self, square):
        fw = build_framework(affine_dependence(square), 2, Flavor.G)
        with pytest.raises(ValidationError):
            global_rigidity_falsifier(fw, square, 3)

    def test_reproducible(self, square):
        fw = build_framework(affine_dependence(square), 1, Flavor.G)
        a = global_rigidity_falsifier(fw, square, 5, seed=9).to_dict()
        b = global_rigidity_falsifier(fw, square, 5, seed=9).to_dict()
        assert a == b


def test_normalization_positive_and_constant():
    for trial in range(10):
        c = general_position_config(MetricSignature.euclidean(3), 5, 71, trial)
        h = dependence_normalization(c, affine_dependence(c))
        assert np.all(h > 0)
        assert np.allclose(h, h[0], rtol=1e-9)
    c = curved_config(Space.HYPERBOLIC, 2, 4, 72, 0)
    h = dependence_normalization(c, affine_dependence(c))
    assert np.all(h > 0) and np.allclose(h, h[0], rtol=1e-9)
