"""Tests for the family catalog: charts, guards, oracles, congruence."""

import numpy as np
import pytest

from s2xs2 import ambient, catalog, shape
from s2xs2.errors import DomainError

rng = np.random.default_rng(21)


def test_points_lie_on_their_level_sets():
    for fam in [
        catalog.s1r_x_s2(0.3),
        catalog.mt(-0.4),
        catalog.mab(),
        catalog.mhat_ab(),
    ]:
        for _ in range(20):
            u = catalog.random_interior_point(fam, rng)
            pt = fam.chart.eval(u)
            assert fam.defining_residual(pt) < 1e-12, fam.name


def test_parameter_validation():
    with pytest.raises(DomainError):
        catalog.s1r_x_s2(0.0)
    with pytest.raises(DomainError):
        catalog.s1r_x_s2(1.5)
    with pytest.raises(DomainError):
        catalog.mt(1.0)
    with pytest.raises(DomainError):
        catalog.make_family("nope")


def test_singular_locus_guards():
    fam = catalog.mab()
    with pytest.raises(DomainError):
        fam.chart.eval(np.array([2.0, 0.0, 0.0]))  # |<p,a>| too large
    fam = catalog.mhat_ab()
    with pytest.raises(DomainError):
        fam.chart.eval(np.array([np.pi / (2 * np.sqrt(2)), 0.0, 0.0]))


def test_oracles_are_internally_consistent():
    for fam in [catalog.s1r_x_s2(0.7), catalog.mt(0.2), catalog.mab(), catalog.mhat_ab()]:
        u = catalog.random_interior_point(fam, rng)
        o = fam.oracle(fam.chart.eval(u))
        lam = o.lambdas
        assert np.all(np.diff(lam) <= 1e-12)  # descending
        assert o.H == pytest.approx(np.sum(lam) / 3.0, abs=1e-12)
        assert o.K == pytest.approx(np.prod(lam), abs=1e-12)
        assert o.rho == pytest.approx(2 + 9 * o.H**2 - np.sum(lam**2), abs=1e-12)


def test_mt_product_of_outer_curvatures():
    # lambda_2 * lambda_3 = -1/2 for every t
    for t in (-0.8, -0.3, 0.0, 0.4, 0.9):
        o = catalog.mt(t).oracle(None)
        assert o.lambdas[0] * o.lambdas[2] == pytest.approx(-0.5, abs=1e-12)


def test_r_equals_one_totally_geodesic():
    fam = catalog.s1r_x_s2(1.0)
    u = catalog.random_interior_point(fam, rng)
    sd = shape.shape_at(fam.chart, u, normal_hint=fam.normal_hint)
    assert np.max(np.abs(sd.sigma)) < 1e-8
    assert abs(sd.C - 1.0) < 1e-9


def test_mt_shape_operator_closed_form():
    t = 0.5
    fam = catalog.mt(t)
    u = catalog.random_interior_point(fam, rng)
    sd = shape.shape_at(fam.chart, u, normal_hint=fam.normal_hint)
    for e in sd.frame:
        v = ambient.tangent(sd.point, e)
        Av = catalog.mt_shape_operator(t, v)
        # compare with sigma applied in the numerical frame
        Av_num = (sd.sigma @ sd.tangent_components(e)) @ sd.frame
        assert np.max(np.abs(Av.ambient - Av_num)) < 1e-8


def test_congruence_invariance_of_scalars():
    fam = catalog.mt(0.3)
    u = catalog.random_interior_point(fam, rng)
    sd = shape.shape_at(fam.chart, u, normal_hint=fam.normal_hint)
    for _ in range(5):
        iso = ambient.random_isometry(rng)
        fam2 = catalog.transform_family(fam, iso)
        sd2 = shape.shape_at(fam2.chart, u, normal_hint=fam2.normal_hint)
        assert np.max(np.abs(sd2.lambdas - sd.lambdas)) < 1e-8
        assert abs(sd2.H - sd.H) < 1e-8
        assert abs(sd2.rho - sd.rho) < 1e-8
        assert abs(sd2.K - sd.K) < 1e-8
        assert abs(abs(sd2.C) - abs(sd.C)) < 1e-8
