"""Tests for the per-point extrinsic pipeline and the residual machinery."""

import numpy as np
import pytest

from s2xs2 import ambient, catalog, shape
from s2xs2.errors import (
    DegenerateSpectrumError,
    PreconditionError,
    SingularChartError,
)
from s2xs2.jets import Chart

rng = np.random.default_rng(7)

FAMILIES = [
    catalog.s1r_x_s2(0.6),
    catalog.mt(0.5),
    catalog.mab(),
    catalog.mhat_ab(),
]


def sample(fam):
    u = catalog.random_interior_point(fam, rng)
    return u, shape.shape_at(fam.chart, u, normal_hint=fam.normal_hint)


def test_frame_and_normal_are_orthonormal():
    for fam in FAMILIES:
        u, sd = sample(fam)
        G = sd.frame @ sd.frame.T
        assert np.max(np.abs(G - np.eye(3))) < 1e-10
        assert abs(sd.N6 @ sd.N6 - 1.0) < 1e-12
        assert np.max(np.abs(sd.frame @ sd.N6)) < 1e-10
        # N is tangent to the product
        assert abs(sd.point.p.coords @ sd.N6[:3]) < 1e-10
        assert abs(sd.point.q.coords @ sd.N6[3:]) < 1e-10


def test_scalars_match_oracles():
    for fam in FAMILIES:
        u, sd = sample(fam)
        o = fam.oracle(sd.point)
        assert np.max(np.abs(sd.lambdas - o.lambdas)) < 1e-6
        assert abs(sd.H - o.H) < 1e-6
        assert abs(sd.rho - o.rho) < 1e-6
        assert abs(sd.K - o.K) < 1e-6
        assert abs(sd.C - o.C) < 1e-9


def test_product_structure_scalars():
    for fam in FAMILIES:
        u, sd = sample(fam)
        # |X|^2 = 1 - C^2 and X orthogonal to N
        assert abs(sd.X6 @ sd.X6 - (1.0 - sd.C**2)) < 1e-10
        assert abs(sd.X6 @ sd.N6) < 1e-10
        # P restricted to the tangent space plus the normal is trace free
        assert abs(np.trace(sd.Pij) + sd.C) < 1e-10
        assert np.sum(sd.Lambda) == pytest.approx(1.0, abs=1e-10)


def test_default_orientation_flips_scalars_consistently():
    fam = catalog.mt(0.5)
    u = catalog.random_interior_point(fam, rng)
    sd_hint = shape.shape_at(fam.chart, u, normal_hint=fam.normal_hint)
    sd_def = shape.shape_at(fam.chart, u)
    sign = np.sign(sd_hint.N6 @ sd_def.N6)
    assert abs(abs(sd_hint.N6 @ sd_def.N6) - 1.0) < 1e-10
    assert np.max(np.abs(sd_def.sigma - sign * sd_hint.sigma)) < 1e-9
    assert abs(sd_def.C - sd_hint.C) < 1e-12  # C is sign independent


def test_char_poly_residual_small():
    for fam in FAMILIES:
        u, sd = sample(fam)
        assert shape.char_poly_residual(sd) < 1e-9


def test_gauss_sectional_precondition():
    fam = catalog.mt(0.5)
    u, sd = sample(fam)
    with pytest.raises(PreconditionError):
        shape.gauss_sectional(sd, 2.0 * sd.frame[0], sd.frame[1])


def test_mt_curvature_oracles():
    fam = catalog.mt(0.3)
    u, sd = sample(fam)
    J1N = ambient.apply_J1(sd.N).ambient
    J2N = ambient.apply_J2(sd.N).ambient
    assert shape.gauss_sectional(sd, J1N, J2N) == pytest.approx(-0.5, abs=1e-6)
    assert shape.gauss_sectional(sd, J1N, sd.X6) == pytest.approx(0.5, abs=1e-6)
    v6 = ambient.project_tangent(sd.point, rng.standard_normal(3) @ sd.frame)
    v6 /= np.linalg.norm(v6)
    assert shape.ricci(sd, v6) == pytest.approx((v6 @ sd.X6) ** 2, abs=1e-6)


def test_structure_identities_on_all_families():
    for fam in FAMILIES:
        u = catalog.random_interior_point(fam, rng)
        F = shape.diff_fields(fam.chart, u, normal_hint=fam.normal_hint)
        res = shape.lemma_residuals(fam.chart, u, fields=F)
        assert res.max() < 1e-4, (fam.name, vars(res))
        trip = [rng.standard_normal(3) @ F.sd.frame for _ in range(3)]
        assert shape.codazzi_residual(fam.chart, u, *trip, fields=F) < 1e-4


def test_lambda_system_mt():
    fam = catalog.mt(0.5)
    u = catalog.random_interior_point(fam, rng)
    FD = shape.lambda_system(fam.chart, u, normal_hint=fam.normal_hint)
    assert FD.gamma_antisymmetry() < 1e-6
    assert np.max(np.abs(FD.residual)) < 1e-3
    assert abs(FD.detB - FD.detB_closed) < 1e-8
    assert np.sum(FD.Lambda) == pytest.approx(1.0, abs=1e-9)
    # directions are orthonormal tangent vectors
    assert np.max(np.abs(FD.directions @ FD.directions.T - np.eye(3))) < 1e-9


def test_lambda_system_rejects_degenerate_spectrum():
    fam = catalog.s1r_x_s2(0.6)
    u = catalog.random_interior_point(fam, rng)
    with pytest.raises(DegenerateSpectrumError):
        shape.lambda_system(fam.chart, u, normal_hint=fam.normal_hint)


def test_singular_chart_detected():
    def ev(u):
        # image does not depend on u[2]: rank 2 differential
        p = np.array([np.cos(u[0]), np.sin(u[0]), 0.0])
        q = np.array([np.cos(u[1]), 0.0, np.sin(u[1])])
        return ambient.ProductPoint(ambient.SpherePoint(p), ambient.SpherePoint(q))

    chart = Chart(eval=ev, domain=[[-1, 1]] * 3, label="degenerate")
    with pytest.raises(SingularChartError) as exc:
        shape.shape_at(chart, [0.1, 0.2, 0.0])
    assert exc.value.smallest_singular_value < 1e-6
