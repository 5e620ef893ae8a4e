"""Line geometry and displacements: examples and invariants."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bennett8.errors import NoFiniteAxis, ParallelLines
from bennett8.screws import (
    Displacement,
    OrientedLine,
    apply,
    common_perpendicular,
    compose,
    displacement_distance,
    dual_angle,
    inverse,
    line_distance,
    line_reflection,
    midline_symmetry_axis,
    rotation_about_line,
    screw_axis,
    screw_displacement,
    signed_dual_position,
)
from conftest import random_displacement, random_line, random_line_pair

X_AXIS = OrientedLine.from_point_direction(np.zeros(3), np.array([1.0, 0, 0]))
Z_AXIS = OrientedLine.from_point_direction(np.zeros(3), np.array([0.0, 0, 1]))


def test_common_perpendicular_example():
    l2 = OrientedLine.from_point_direction(np.array([0, 0, 1.0]), np.array([0, 1.0, 0]))
    cp = common_perpendicular(X_AXIS, l2)
    assert np.allclose(np.abs(cp.axis.d), [0, 0, 1])
    assert cp.distance == pytest.approx(1.0, abs=1e-14)
    assert cp.angle == pytest.approx(np.pi / 2, abs=1e-14)


def test_common_perpendicular_parallel_rejected():
    shifted = OrientedLine.from_point_direction(np.array([0, 0, 0.7]), np.array([1.0, 0, 0]))
    with pytest.raises(ParallelLines):
        common_perpendicular(X_AXIS, shifted)
    with pytest.raises(ParallelLines):
        common_perpendicular(X_AXIS, X_AXIS)


def test_common_perpendicular_intersecting():
    other = OrientedLine.from_point_direction(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
    cp = common_perpendicular(X_AXIS, other)
    assert cp.distance == pytest.approx(0.0, abs=1e-14)
    assert np.allclose(cp.foot1, [1, 0, 0], atol=1e-14)


def test_line_reflection_examples():
    refl = line_reflection(Z_AXIS)
    assert np.allclose(apply(refl, np.array([1.0, 0, 0])), [-1, 0, 0], atol=1e-15)
    # applied twice = identity
    assert displacement_distance(compose(refl, refl), Displacement.identity()) < 1e-15
    img = apply(refl, X_AXIS)
    assert line_distance(img, X_AXIS.reversed()) < 1e-15


def test_line_reflection_has_zero_scalar_part():
    rng = np.random.default_rng(2)
    for _ in range(50):
        refl = line_reflection(random_line(rng))
        assert refl.q_r[0] == 0.0


def test_compose_of_two_line_reflections_is_screw():
    # reflections about two lines with common perpendicular p and dual angle
    # (theta, c) compose to the screw about p with angle 2 theta, translation 2c
    rng = np.random.default_rng(4)
    for _ in range(50):
        l1, l2 = random_line_pair(rng, min_cross=0.05)
        cp = common_perpendicular(l1, l2)
        d = compose(line_reflection(l2), line_reflection(l1))
        params = screw_axis(d)
        ang, off = signed_dual_position(cp.axis, l1, l2)
        want_angle = 2 * ang
        want_trans = 2 * off
        # screw_axis normalizes the angle into (0, pi] with the axis carrying the sense
        flip = 1.0 if np.dot(params.axis.d, cp.axis.d) >= 0 else -1.0
        got_angle = flip * params.angle
        got_trans = flip * params.translation
        two_pi = 2 * np.pi
        assert min(
            abs(got_angle - want_angle) % two_pi, two_pi - abs(got_angle - want_angle) % two_pi
        ) == pytest.approx(0.0, abs=1e-9)
        assert got_trans == pytest.approx(want_trans, abs=1e-9)


def test_reflections_about_intersecting_orthogonal_axes():
    d = compose(line_reflection(Z_AXIS), line_reflection(X_AXIS))
    y_axis = OrientedLine.from_point_direction(np.zeros(3), np.array([0, 1.0, 0]))
    assert displacement_distance(d, line_reflection(y_axis)) < 1e-15


def test_compose_inverse_identity():
    rng = np.random.default_rng(6)
    for _ in range(50):
        d = random_displacement(rng)
        assert displacement_distance(compose(d, inverse(d)), Displacement.identity()) < 1e-12


def test_chain_preserves_norm_and_study():
    rng = np.random.default_rng(8)
    d = Displacement.identity()
    for _ in range(100):
        d = compose(d, random_displacement(rng))
        qr, qd = d.q_r, d.q_d
        assert abs(np.linalg.norm(qr) - 1) < 1e-10
        assert abs(np.dot(qr, qd)) < 1e-10


def test_apply_preserves_pluecker():
    rng = np.random.default_rng(9)
    for _ in range(100):
        d = random_displacement(rng)
        line = apply(d, random_line(rng))
        assert abs(np.linalg.norm(line.d) - 1) < 1e-10
        assert abs(np.dot(line.d, line.m)) < 1e-10


def test_screw_axis_round_trip():
    d = screw_displacement(Z_AXIS, 0.7, 0.3)
    params = screw_axis(d)
    assert params.angle == pytest.approx(0.7, abs=1e-10)
    assert params.translation == pytest.approx(0.3, abs=1e-10)
    assert line_distance(params.axis, Z_AXIS) < 1e-10


def test_screw_axis_round_trip_random():
    rng = np.random.default_rng(10)
    for _ in range(100):
        axis = random_line(rng)
        angle = rng.uniform(-np.pi + 0.01, np.pi - 0.01)
        if abs(angle) < 0.01:
            continue
        trans = rng.uniform(-2, 2)
        original = screw_displacement(axis, angle, trans)
        params = screw_axis(original)
        rebuilt = screw_displacement(params.axis, params.angle, params.translation)
        assert displacement_distance(rebuilt, original) < 1e-10
        # angle folds to (0, pi] with the axis orientation carrying the sense
        sign = 1.0 if np.dot(params.axis.d, axis.d) >= 0 else -1.0
        assert params.angle == pytest.approx(abs(angle), abs=1e-9)
        assert sign == pytest.approx(np.sign(angle))
        assert params.translation == pytest.approx(sign * trans, abs=1e-9)


def test_screw_axis_refuses_identity_and_translation():
    with pytest.raises(NoFiniteAxis):
        screw_axis(Displacement.identity())
    translation = Displacement(np.array([1.0, 0, 0, 0]), np.array([0.0, 0.1, 0.2, -0.3]))
    with pytest.raises(NoFiniteAxis):
        screw_axis(translation)


def test_halfturn_detection_values():
    params = screw_axis(line_reflection(Z_AXIS))
    assert abs(params.angle - np.pi) < 1e-9
    assert abs(params.translation) < 1e-9


def test_dual_angle_examples():
    skew = OrientedLine.from_point_direction(np.array([0, 0, 1.0]), np.array([0, 1.0, 0]))
    assert dual_angle(X_AXIS, skew) == pytest.approx((np.pi / 2, 1.0), abs=1e-14)
    meet = OrientedLine.from_point_direction(
        np.zeros(3), np.array([np.cos(np.pi / 6), np.sin(np.pi / 6), 0])
    )
    ang, off = dual_angle(X_AXIS, meet)
    assert ang == pytest.approx(np.pi / 6, abs=1e-12)
    assert off == pytest.approx(0.0, abs=1e-12)


def test_dual_angle_rigid_invariance():
    rng = np.random.default_rng(12)
    for _ in range(100):
        l1, l2 = random_line_pair(rng, min_cross=0.02)
        a0 = dual_angle(l1, l2)
        d = random_displacement(rng)
        a1 = dual_angle(apply(d, l1), apply(d, l2))
        assert a1[0] == pytest.approx(a0[0], abs=1e-10)
        assert a1[1] == pytest.approx(a0[1], abs=1e-9)


def test_midline_symmetry_axis():
    rng = np.random.default_rng(14)
    for _ in range(100):
        l1, l2 = random_line_pair(rng, min_cross=0.02)
        s = midline_symmetry_axis(l1, l2)
        img = apply(line_reflection(s), l1)
        assert line_distance(img, l2) < 1e-10
    # intersecting lines: the axis passes through the intersection point
    meet = OrientedLine.from_point_direction(np.array([2.0, 0, 0]), np.array([0, 1.0, 0]))
    s = midline_symmetry_axis(X_AXIS, meet)
    off = np.array([2.0, 0, 0]) - s.foot()
    assert np.linalg.norm(off - np.dot(off, s.d) * s.d) < 1e-12


def test_midline_round_trip_through_reflection():
    rng = np.random.default_rng(15)
    for _ in range(50):
        axis = random_line(rng)
        line = random_line(rng)
        if np.linalg.norm(np.cross(axis.d, line.d)) < 0.05:
            continue
        img = apply(line_reflection(axis), line)
        if np.linalg.norm(np.cross(line.d, img.d)) < 1e-6:
            continue  # line orthogonal to axis maps to its own reverse
        s = midline_symmetry_axis(line, img)
        # recovered axis agrees up to orientation
        assert min(
            line_distance(s, axis), line_distance(s, axis.reversed())
        ) < 1e-9


def test_rotation_about_line_moves_points_correctly():
    rot = rotation_about_line(Z_AXIS, np.pi / 2)
    assert np.allclose(apply(rot, np.array([1.0, 0, 0])), [0, 1, 0], atol=1e-15)
    shifted = OrientedLine.from_point_direction(np.array([1.0, 0, 0]), np.array([0, 0, 1.0]))
    rot = rotation_about_line(shifted, np.pi)
    assert np.allclose(apply(rot, np.array([0.0, 0, 0])), [2, 0, 0], atol=1e-14)


@given(st.floats(-3, 3), st.floats(-2, 2), st.floats(-3, 3), st.floats(-2, 2))
@settings(max_examples=50, deadline=None)
def test_screws_about_same_axis_commute_and_add(a1, t1, a2, t2):
    d1 = screw_displacement(Z_AXIS, a1, t1)
    d2 = screw_displacement(Z_AXIS, a2, t2)
    combined = screw_displacement(Z_AXIS, a1 + a2, t1 + t2)
    assert displacement_distance(compose(d2, d1), combined) < 1e-12
    assert displacement_distance(compose(d1, d2), combined) < 1e-12
