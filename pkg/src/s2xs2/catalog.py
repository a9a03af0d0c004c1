"""Charts and closed-form oracles for the example hypersurface families.

Four families are provided:

* ``s1rxs2``   -- circle-times-sphere level sets of G(p, q) = <p, a>,
* ``mt``       -- the three-curvature level sets of F(p, q) = <p, q>,
* ``mab``      -- the minimal family  <p, a> + <q, b> = 0,
* ``mhat``     -- the constant-curvature family <p, a>^2 + <q, b>^2 = 1.

Each family carries a chart, a closed-form normal field used to orient the
numerical pipeline consistently, a closed-form oracle for the extrinsic
scalars, and the residual of its defining equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import ambient
from .ambient import (
    AmbientIsometry,
    ProductPoint,
    SpherePoint,
    apply_isometry,
    apply_isometry_tangent,
)
from .errors import DomainError
from .jets import Chart
from .shape import NormalHint

TWO_PI = 2.0 * math.pi
POLAR_CAP = 1.2          # latitude cutoff, ~69 deg; charts degenerate at poles
MAB_GUARD = 0.95         # |<p,a>| bound away from the ramification points
MHAT_GUARD = 0.05        # |<p,a><q,b>| lower bound


@dataclass(frozen=True)
class OracleValues:
    """Closed-form expected extrinsic scalars at one point."""

    lambdas: np.ndarray   # descending
    H: float
    rho: float
    K: float
    C: float


@dataclass(frozen=True)
class Family:
    """A catalog entry: chart, normal orientation, and closed-form oracle."""

    name: str
    params: dict
    chart: Chart
    normal_hint: NormalHint
    oracle: Callable[[ProductPoint], OracleValues]
    defining_residual: Callable[[ProductPoint], float]
    sample_margin: float = 0.05


def _sorted_desc(*vals: float) -> np.ndarray:
    return np.array(sorted(vals, reverse=True))


# ---------------------------------------------------------------------------
# S^1(r) x S^2


def s1r_x_s2(r: float) -> Family:
    if not 0.0 < r <= 1.0:
        raise DomainError("r must lie in (0, 1]")
    z = math.sqrt(1.0 - r * r)
    a = np.array([0.0, 0.0, 1.0])

    def ev(u):
        p = np.array([r * math.cos(u[0]), r * math.sin(u[0]), z])
        q = np.array(
            [
                math.cos(u[1]) * math.cos(u[2]),
                math.cos(u[1]) * math.sin(u[2]),
                math.sin(u[1]),
            ]
        )
        return ProductPoint(SpherePoint(p), SpherePoint(q))

    chart = Chart(
        eval=ev,
        domain=[[0.0, TWO_PI], [-POLAR_CAP, POLAR_CAP], [0.0, TWO_PI]],
        label=f"s1rxs2(r={r:g})",
    )

    def hint(u, pt):
        p = pt.p.coords
        return np.concatenate([a - (p @ a) * p, np.zeros(3)])

    lam = z / r
    oracle_vals = OracleValues(
        lambdas=_sorted_desc(lam, 0.0, 0.0), H=lam / 3.0, rho=2.0, K=0.0, C=1.0
    )

    def oracle(pt):
        return oracle_vals

    def defining(pt):
        return abs(float(pt.p.coords @ a) - z)

    return Family(
        name="s1rxs2",
        params={"r": r},
        chart=chart,
        normal_hint=hint,
        oracle=oracle,
        defining_residual=defining,
    )


# ---------------------------------------------------------------------------
# M_t


def mt(t: float) -> Family:
    if not -1.0 < t < 1.0:
        raise DomainError("t must lie in (-1, 1)")
    w = math.sqrt(1.0 - t * t)

    def ev(u):
        cu, su = math.cos(u[0]), math.sin(u[0])
        cv, sv = math.cos(u[1]), math.sin(u[1])
        p = np.array([cu * cv, cu * sv, su])
        f1 = np.array([-su * cv, -su * sv, cu])
        f2 = np.array([-sv, cv, 0.0])
        q = t * p + w * (math.cos(u[2]) * f1 + math.sin(u[2]) * f2)
        return ProductPoint(SpherePoint(p), SpherePoint(q))

    chart = Chart(
        eval=ev,
        domain=[[-POLAR_CAP, POLAR_CAP], [0.0, TWO_PI], [0.0, TWO_PI]],
        label=f"mt(t={t:g})",
    )

    def hint(u, pt):
        p, q = pt.p.coords, pt.q.coords
        return np.concatenate([q - t * p, p - t * q])

    lam2 = math.sqrt((1.0 + t) / (1.0 - t)) / math.sqrt(2.0)
    lam3 = -math.sqrt((1.0 - t) / (1.0 + t)) / math.sqrt(2.0)
    oracle_vals = OracleValues(
        lambdas=_sorted_desc(lam2, 0.0, lam3),
        H=math.sqrt(2.0) * t / (3.0 * w),
        rho=1.0,
        K=0.0,
        C=0.0,
    )

    def oracle(pt):
        return oracle_vals

    def defining(pt):
        return abs(float(pt.p.coords @ pt.q.coords) - t)

    return Family(
        name="mt",
        params={"t": t},
        chart=chart,
        normal_hint=hint,
        oracle=oracle,
        defining_residual=defining,
    )


def mt_shape_operator(t: float, v: ambient.ProductTangent) -> ambient.ProductTangent:
    """Closed-form shape operator of the ``mt`` family applied to a tangent."""
    pt = v.base
    p, q = pt.p.coords, pt.q.coords
    c = 1.0 / math.sqrt(2.0 * (1.0 - t * t))
    pv2 = float(p @ v.v2)
    w1 = c * (t * v.v1 - v.v2 + pv2 * p)
    w2 = c * (t * v.v2 - v.v1 - pv2 * q)
    return ambient.tangent(pt, ambient.project_tangent(pt, np.concatenate([w1, w2])))


# ---------------------------------------------------------------------------
# M_{a,b} with a = (0,0,1), b = (0,0,-1)


def mab() -> Family:
    a = np.array([0.0, 0.0, 1.0])
    b = np.array([0.0, 0.0, -1.0])
    s2 = math.sqrt(2.0)

    def ev(u):
        c, s = math.cos(u[0] / s2), math.sin(u[0] / s2)
        if abs(s) > MAB_GUARD:
            raise DomainError(
                f"parameter {u[0]:g} reaches the singular locus guard |<p,a>| > {MAB_GUARD}"
            )
        p = c * np.array([math.cos(u[1]), math.sin(u[1]), 0.0]) + s * a
        q = c * np.array([math.cos(u[2]), math.sin(u[2]), 0.0]) - s * b
        return ProductPoint(SpherePoint(p), SpherePoint(q))

    u0max = s2 * math.asin(MAB_GUARD) - 0.05
    chart = Chart(
        eval=ev,
        domain=[[-u0max, u0max], [0.0, TWO_PI], [0.0, TWO_PI]],
        label="mab",
    )

    def hint(u, pt):
        p, q = pt.p.coords, pt.q.coords
        return np.concatenate([a - (p @ a) * p, b - (q @ b) * q])

    def oracle(pt):
        pa = float(pt.p.coords @ a)
        mu = pa / math.sqrt(2.0 * (1.0 - pa * pa))
        return OracleValues(
            lambdas=_sorted_desc(mu, 0.0, -mu),
            H=0.0,
            rho=(2.0 - 3.0 * pa * pa) / (1.0 - pa * pa),
            K=0.0,
            C=0.0,
        )

    def defining(pt):
        return abs(float(pt.p.coords @ a) + float(pt.q.coords @ b))

    return Family(
        name="mab",
        params={},
        chart=chart,
        normal_hint=hint,
        oracle=oracle,
        defining_residual=defining,
    )


# ---------------------------------------------------------------------------
# M-hat_{a,b} with a = b = (0,0,1)


def mhat_ab() -> Family:
    a = np.array([0.0, 0.0, 1.0])
    s2 = math.sqrt(2.0)

    def ev(u):
        c, s = math.cos(u[0] / s2), math.sin(u[0] / s2)
        if abs(c * c - s * s) < 2.0 * MHAT_GUARD:
            raise DomainError(
                f"parameter {u[0]:g} reaches the singular locus guard "
                f"|<p,a><q,b>| < {MHAT_GUARD}"
            )
        p = ((c - s) / s2) * np.array([math.cos(u[1]), math.sin(u[1]), 0.0])
        p = p + np.array([0.0, 0.0, (c + s) / s2])
        q = ((c + s) / s2) * np.array([math.cos(u[2]), math.sin(u[2]), 0.0])
        q = q + np.array([0.0, 0.0, (c - s) / s2])
        return ProductPoint(SpherePoint(p), SpherePoint(q))

    chart = Chart(
        eval=ev,
        domain=[[-0.9, 0.9], [0.0, TWO_PI], [0.0, TWO_PI]],
        label="mhat",
    )

    def hint(u, pt):
        p, q = pt.p.coords, pt.q.coords
        pa, qb = float(p @ a), float(q @ a)
        return np.concatenate([pa * (a - pa * p), qb * (a - qb * q)])

    def oracle(pt):
        pa = float(pt.p.coords @ a)
        qb = float(pt.q.coords @ a)
        den = s2 * abs(pa * qb)
        return OracleValues(
            lambdas=_sorted_desc(pa * pa / den, qb * qb / den, 0.0),
            H=1.0 / (3.0 * den),
            rho=3.0,
            K=0.0,
            C=0.0,
        )

    def defining(pt):
        pa = float(pt.p.coords @ a)
        qb = float(pt.q.coords @ a)
        return abs(pa * pa + qb * qb - 1.0)

    return Family(
        name="mhat",
        params={},
        chart=chart,
        normal_hint=hint,
        oracle=oracle,
        defining_residual=defining,
    )


# ---------------------------------------------------------------------------
# helpers


FAMILY_BUILDERS = {
    "s1rxs2": lambda **kw: s1r_x_s2(kw.get("r", 0.6)),
    "mt": lambda **kw: mt(kw.get("t", 0.5)),
    "mab": lambda **kw: mab(),
    "mhat": lambda **kw: mhat_ab(),
}


def make_family(name: str, **params) -> Family:
    try:
        builder = FAMILY_BUILDERS[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; choose from {sorted(FAMILY_BUILDERS)}")
    return builder(**params)


def random_interior_point(
    family: Family, rng: np.random.Generator, margin: Optional[float] = None
) -> np.ndarray:
    """A uniform random chart parameter with a safe margin from the boundary."""
    m = family.sample_margin if margin is None else margin
    lo = family.chart.domain[:, 0] + m
    hi = family.chart.domain[:, 1] - m
    return lo + (hi - lo) * rng.random(3)


def transform_family(family: Family, iso: AmbientIsometry) -> Family:
    """The congruent family obtained by composing the chart with an isometry."""
    base_chart = family.chart
    base_hint = family.normal_hint

    def ev(u):
        return apply_isometry(iso, base_chart.eval(u))

    def hint(u, pt):
        pt0 = base_chart.eval(u)
        h6 = ambient.project_tangent(pt0, base_hint(u, pt0))
        return apply_isometry_tangent(iso, ambient.tangent(pt0, h6)).ambient

    return Family(
        name=family.name,
        params=family.params,
        chart=Chart(eval=ev, domain=base_chart.domain, label=base_chart.label + "+iso"),
        normal_hint=hint,
        oracle=family.oracle,
        defining_residual=lambda pt: float("nan"),
        sample_margin=family.sample_margin,
    )
