"""Tests for the finite-difference jet engine."""

import numpy as np
import pytest

from s2xs2 import ambient
from s2xs2.errors import DomainError, EvaluationError
from s2xs2.jets import Chart, jet2


def analytic_chart():
    """A chart of S^2 x S^2 with hand-computable partials."""

    def ev(u):
        p = np.array([np.cos(u[0]), np.sin(u[0]), 0.0])
        q = np.array(
            [np.cos(u[1]) * np.cos(u[2]), np.cos(u[1]) * np.sin(u[2]), np.sin(u[1])]
        )
        return ambient.ProductPoint(ambient.SpherePoint(p), ambient.SpherePoint(q))

    return Chart(eval=ev, domain=[[-3, 3], [-1.2, 1.2], [-3, 3]], label="test")


def exact_d1(u):
    d = np.zeros((3, 6))
    d[0, :3] = [-np.sin(u[0]), np.cos(u[0]), 0.0]
    d[1, 3:] = [-np.sin(u[1]) * np.cos(u[2]), -np.sin(u[1]) * np.sin(u[2]), np.cos(u[1])]
    d[2, 3:] = [-np.cos(u[1]) * np.sin(u[2]), np.cos(u[1]) * np.cos(u[2]), 0.0]
    return d


def test_first_and_second_partials_accurate():
    chart = analytic_chart()
    u = np.array([0.4, 0.3, 1.1])
    jet = jet2(chart, u)
    assert np.max(np.abs(jet.d1 - exact_d1(u))) < 1e-11
    # second partials against a trigonometric identity: d2/du0^2 p = -p
    assert np.max(np.abs(jet.d2[0, 0, :3] + jet.x[:3])) < 1e-9
    assert np.max(np.abs(jet.d2[0, 0, 3:])) < 1e-9
    # mixed partial d2/du1 du2 of q
    u1, u2 = u[1], u[2]
    mixed = np.array([np.sin(u1) * np.sin(u2), -np.sin(u1) * np.cos(u2), 0.0])
    assert np.max(np.abs(jet.d2[1, 2, 3:] - mixed)) < 1e-9
    assert np.max(np.abs(jet.d2 - jet.d2.transpose(1, 0, 2))) == 0.0
    assert jet.err_est < 1e-8


def test_error_estimate_scales_like_h4():
    chart = analytic_chart()
    u = np.array([0.4, 0.3, 1.1])
    # steps large enough that truncation dominates rounding noise
    e1 = jet2(chart, u, h1=8e-2, h2=8e-2).err_est
    e2 = jet2(chart, u, h1=4e-2, h2=4e-2).err_est
    # two Richardson levels: halving h should shrink the estimate ~16x
    assert e2 < e1 / 6.0


def test_first_order_jet_skips_second_partials():
    chart = analytic_chart()
    u = np.array([0.4, 0.3, 1.1])
    jet = jet2(chart, u, order=1)
    assert np.max(np.abs(jet.d1 - exact_d1(u))) < 1e-11
    assert np.all(jet.d2 == 0.0)


def test_boundary_margin_guard():
    chart = analytic_chart()
    with pytest.raises(DomainError):
        jet2(chart, [2.999, 0.0, 0.0])


def test_non_finite_evaluation():
    def ev(u):
        return np.full(6, np.nan)

    with pytest.raises(EvaluationError):
        jet2(ev, [0.0, 0.0, 0.0])
