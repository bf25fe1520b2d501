import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperatlas.ambient import (
    AmbientPoint,
    Isometry,
    boost,
    eta,
    general_point,
    horolation,
    minkowski_inner,
    rotation,
)

angles = st.floats(-2.0, 2.0, allow_nan=False)


def test_minkowski_inner_examples():
    o = AmbientPoint.origin(2)
    assert minkowski_inner(o, o) == -1.0
    p = AmbientPoint([np.sinh(1), 0.0, np.cosh(1)])
    assert minkowski_inner(p, p) == pytest.approx(-1.0, abs=1e-12)
    q = AmbientPoint([1.0, 0.5, 1.5])
    assert minkowski_inner(q, o) == pytest.approx(-1.5, abs=1e-15)


def test_minkowski_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        minkowski_inner(AmbientPoint.origin(2), AmbientPoint.origin(3))


def test_point_rejects_lower_sheet_and_off_shell():
    with pytest.raises(ValueError):
        AmbientPoint([0.0, 0.0, -1.0])
    with pytest.raises(ValueError):
        AmbientPoint([0.1, 0.0, 1.0])
    with pytest.raises(ValueError):
        AmbientPoint([0.0, 1.0])


def test_lift():
    p = AmbientPoint.lift([0.3, -0.2, 0.5])
    assert p.dim == 3
    assert abs(p.constraint_residual()) < 1e-15


def test_rotation_examples():
    np.testing.assert_allclose(rotation(2, 0.0).matrix, np.eye(3))
    out = rotation(2, np.pi / 2) @ AmbientPoint([1.0, 0.0, np.sqrt(2.0)])
    np.testing.assert_allclose(out.coords, [0.0, -1.0, np.sqrt(2.0)], atol=1e-15)
    np.testing.assert_allclose((rotation(3, 0.7) @ rotation(3, -0.7)).matrix, np.eye(4), atol=1e-15)


def test_boost_examples():
    np.testing.assert_allclose(boost(2, 0.4, 0.0).matrix, np.eye(3), atol=1e-15)
    b = 0.9
    out = boost(2, 0.0, b) @ AmbientPoint.origin(2)
    np.testing.assert_allclose(out.coords, [np.sinh(b), 0.0, np.cosh(b)], atol=1e-15)
    np.testing.assert_allclose(
        (boost(2, 0.0, 0.3) @ boost(2, 0.0, 0.4)).matrix, boost(2, 0.0, 0.7).matrix, atol=1e-14
    )


def test_boost_is_conjugated_rotation():
    phi, a = 0.8, 0.6
    r = rotation(2, phi).matrix
    bx = boost(2, 0.0, a).matrix
    np.testing.assert_allclose(boost(2, phi, a).matrix, r @ bx @ np.linalg.inv(r), atol=1e-14)


def test_horolation_examples():
    np.testing.assert_allclose(horolation(0.0).matrix, np.eye(3))
    np.testing.assert_allclose((horolation(0.3) @ horolation(0.4)).matrix, horolation(0.7).matrix, atol=1e-12)
    out = horolation(1.0) @ AmbientPoint.origin(2)
    np.testing.assert_allclose(out.coords, [1.0, 0.5, 1.5], atol=1e-15)


def test_horolation_3d_block_extension():
    m = horolation(0.5, dim=3).matrix
    np.testing.assert_allclose(m[1], [0.0, 1.0, 0.0, 0.0])
    np.testing.assert_allclose(m[np.ix_([0, 2, 3], [0, 2, 3])], horolation(0.5).matrix)


def test_general_point_examples():
    np.testing.assert_allclose(general_point(0, 0, 0).coords, [0, 0, 1], atol=1e-15)
    chi = 0.7
    np.testing.assert_allclose(general_point(0, 0, chi).coords, [np.sinh(chi), 0, np.cosh(chi)], atol=1e-15)
    a, b = 0.5, 0.25
    expect = [np.sinh(b), np.sinh(a) * np.cosh(b), np.cosh(a) * np.cosh(b)]
    np.testing.assert_allclose(general_point(0, a, b).coords, expect, atol=1e-15)


def test_general_point_rotation_is_counter_clockwise():
    # a = 0 gives the polar parametrization (cos phi sinh b, sin phi sinh b, cosh b)
    phi, b = 1.1, 0.8
    expect = [np.cos(phi) * np.sinh(b), np.sin(phi) * np.sinh(b), np.cosh(b)]
    np.testing.assert_allclose(general_point(phi, 0.0, b).coords, expect, atol=1e-14)


def test_isometry_rejects_non_isometries():
    with pytest.raises(ValueError):
        Isometry(np.diag([2.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        Isometry(np.diag([-1.0, 1.0, 1.0]))  # reflection, det = -1


def test_inverse():
    L = boost(3, 0.3, 1.2) @ horolation(-0.4, dim=3) @ rotation(3, 2.0)
    np.testing.assert_allclose((L @ L.inverse()).matrix, np.eye(4), atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(angles, angles, angles, angles)
def test_constructed_isometries_preserve_form(phi, a, mu, dim_pick):
    dim = 2 if dim_pick < 0 else 3
    for L in (rotation(dim, phi), boost(dim, phi, a), horolation(mu, dim)):
        m = L.matrix
        assert np.max(np.abs(m.T @ eta(dim) @ m - eta(dim))) < 1e-12 * max(1, np.abs(m).max() ** 2)
        assert abs(np.linalg.det(m) - 1) < 1e-12 * max(1, np.abs(m).max() ** 2)


@settings(max_examples=60, deadline=None)
@given(angles, angles, angles)
def test_isometries_keep_points_on_hyperboloid(phi, a, b):
    p = general_point(phi, a, b)
    q = (boost(2, a, b) @ horolation(phi)) @ p
    assert abs(q.constraint_residual()) < 1e-12 * q.coords[-1] ** 2
