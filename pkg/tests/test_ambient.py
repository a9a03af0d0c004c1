"""Tests for the closed-form ambient geometry of S^2 x S^2."""

import numpy as np
import pytest

from s2xs2 import ambient
from s2xs2.errors import TangencyError

rng = np.random.default_rng(12345)


def rand_setup():
    pt = ambient.random_point(rng)
    return pt, ambient.random_tangent(rng, pt)


def test_tangent_validation():
    pt = ambient.random_point(rng)
    bad = np.ones(6)
    with pytest.raises(TangencyError):
        ambient.ProductTangent(pt, bad[:3], bad[3:])
    good = ambient.project_tangent(pt, bad)
    t = ambient.tangent(pt, good)
    assert abs(t.norm() ** 2 - float(good @ good)) < 1e-12


def test_P_is_isometric_involution():
    pt, t = rand_setup()
    s = ambient.random_tangent(rng, pt)
    Pt = ambient.apply_P(t)
    assert np.allclose(ambient.apply_P(Pt).ambient, t.ambient)
    assert abs(ambient.inner(Pt, ambient.apply_P(s)) - ambient.inner(t, s)) < 1e-12
    # P is trace free on each tangent space
    frame = ambient.product_tangent_basis(pt)
    tr = sum(
        float(ambient.apply_P6(e) @ e) for e in frame
    )
    assert abs(tr) < 1e-12


def test_complex_structures_square_to_minus_one():
    pt, t = rand_setup()
    for J in (ambient.apply_J1, ambient.apply_J2):
        JJt = J(J(t))
        assert np.allclose(JJt.ambient, -t.ambient, atol=1e-12)
        # isometric
        assert abs(J(t).norm() - t.norm()) < 1e-12


def test_curvature_tensor_symmetries():
    pt = ambient.random_point(rng)
    v, w, x, y = (ambient.random_tangent(rng, pt) for _ in range(4))
    R = ambient.curvature_R
    a = R(v, w, x, y)
    assert abs(a + R(w, v, x, y)) < 1e-12
    assert abs(a + R(v, w, y, x)) < 1e-12
    assert abs(a - R(x, y, v, w)) < 1e-12
    # first Bianchi
    assert abs(R(v, w, x, y) + R(w, x, v, y) + R(x, v, w, y)) < 1e-12


def test_curvature_base_mismatch():
    pt1 = ambient.random_point(rng)
    pt2 = ambient.random_point(rng)
    v = ambient.random_tangent(rng, pt1)
    w = ambient.random_tangent(rng, pt2)
    with pytest.raises(TangencyError):
        ambient.curvature_R(v, w, w, v)


def test_sphere_exp_stays_on_sphere_and_arclength():
    p = ambient.SpherePoint(rng.standard_normal(3))
    t1, t2 = ambient.sphere_tangent_basis(p)
    v = 0.7 * t1 + 0.2 * t2
    q = ambient.sphere_exp(p, v)
    assert abs(np.linalg.norm(q.coords) - 1.0) < 1e-12
    # geodesic distance equals |v|
    dist = np.arccos(np.clip(p.coords @ q.coords, -1, 1))
    assert abs(dist - np.linalg.norm(v)) < 1e-12
    with pytest.raises(TangencyError):
        ambient.sphere_exp(p, p.coords)


def test_tangent_basis_orientation():
    p = ambient.SpherePoint(rng.standard_normal(3))
    t1, t2 = ambient.sphere_tangent_basis(p)
    assert np.allclose(np.cross(t1, t2), p.coords, atol=1e-12)
    pt = ambient.random_point(rng)
    T4 = ambient.product_tangent_basis(pt)
    assert np.allclose(T4 @ T4.T, np.eye(4), atol=1e-12)


def test_isometries_preserve_inner_products():
    pt, t = rand_setup()
    s = ambient.random_tangent(rng, pt)
    for iso in (
        ambient.identity_isometry(),
        ambient.swap_isometry(),
        ambient.random_isometry(rng),
    ):
        t2 = ambient.apply_isometry_tangent(iso, t)
        s2 = ambient.apply_isometry_tangent(iso, s)
        assert abs(ambient.inner(t2, s2) - ambient.inner(t, s)) < 1e-12


def test_isometry_rejects_non_orthogonal_blocks():
    with pytest.raises(ValueError):
        ambient.AmbientIsometry(np.ones((3, 3)), np.eye(3))


def test_isoparametric_identities_F_and_G():
    a = ambient.SpherePoint(np.array([0.0, 0.0, 1.0]))
    worst_f = worst_g = 0.0
    for _ in range(50):
        pt = ambient.random_point(rng)
        F = ambient.iso_F(pt)
        g2, lap = ambient.ambient_grad_laplacian(ambient.iso_F, pt)
        worst_f = max(worst_f, abs(g2 - 2.0 * (1.0 - F * F)), abs(lap + 4.0 * F))
        G = ambient.iso_G(pt, a)
        g2, lap = ambient.ambient_grad_laplacian(lambda x: ambient.iso_G(x, a), pt)
        worst_g = max(worst_g, abs(g2 - (1.0 - G * G)), abs(lap + 2.0 * G))
    assert worst_f < 1e-6
    assert worst_g < 1e-6
