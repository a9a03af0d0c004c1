"""Parallel hypersurfaces and the determinant controlling their volume.

Flowing a hypersurface a signed distance s along its unit normal moves each
factor point along a circle whose frequencies are C+ = sqrt((1+C)/2) and
C- = sqrt((1-C)/2).  In the adapted tangent frame (E1, E2, E3) built from
the tangential part of PN and from J1 N +- J2 N, the differential of the
flow is triangularizable and its determinant has a short closed form in s.
This module provides the flowed chart, the Q matrix and its determinant
(both directly and in closed form), the Maclaurin coefficients of the
determinant, the mean curvature of the parallel surfaces, and the first
focal distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import ambient
from .ambient import ProductPoint, apply_P6
from .errors import PreconditionError
from .jets import Chart, jet2, H1_DEFAULT
from .shape import NormalHint, ShapeData

S_MAX_DEFAULT = math.sqrt(2.0) * math.pi   # period of the slowest normal circle
DEGENERATE_C2 = 1e-6                       # 1 - C^2 below this: use limit frames


def _sinc_factor(a: float, s: float) -> float:
    """sin(a s) / a, continuous through a = 0."""
    if abs(a) < 1e-6:
        return s * (1.0 - (a * s) ** 2 / 6.0)
    return math.sin(a * s) / a


def _split_normal(pos: ProductPoint, N6: np.ndarray):
    return N6[:3], N6[3:]


def flow_point(pos: ProductPoint, N6: np.ndarray, s: float) -> ProductPoint:
    """The point at signed normal distance ``s`` along the product geodesic."""
    n1, n2 = _split_normal(pos, N6)
    cp = np.linalg.norm(n1)
    cm = np.linalg.norm(n2)
    p = math.cos(cp * s) * pos.p.coords + _sinc_factor(cp, s) * n1
    q = math.cos(cm * s) * pos.q.coords + _sinc_factor(cm, s) * n2
    return ProductPoint(ambient.SpherePoint(p), ambient.SpherePoint(q))


def flow_normal(pos: ProductPoint, N6: np.ndarray, s: float) -> np.ndarray:
    """Parallel transport of the unit normal along the normal geodesic."""
    n1, n2 = _split_normal(pos, N6)
    cp = np.linalg.norm(n1)
    cm = np.linalg.norm(n2)
    m1 = math.cos(cp * s) * n1 - cp * math.sin(cp * s) * pos.p.coords
    m2 = math.cos(cm * s) * n2 - cm * math.sin(cm * s) * pos.q.coords
    return np.concatenate([m1, m2])


def _light_normal(chart: Chart, u, h1: float, normal_hint: Optional[NormalHint]):
    """(point, oriented unit normal) from a first-order jet only."""
    jet = jet2(chart, u, h1=h1, h2=h1, order=1)
    pos = jet.pos
    d1t = np.array([ambient.project_tangent(pos, row) for row in jet.d1])
    R = np.linalg.cholesky(d1t @ d1t.T)
    frame = np.linalg.inv(R) @ d1t
    T4 = ambient.product_tangent_basis(pos)
    comps = frame @ T4.T
    _, _, vt = np.linalg.svd(comps)
    n4 = vt[-1]
    N6 = n4 @ T4
    N6 /= np.linalg.norm(N6)
    if normal_hint is not None:
        if float(np.asarray(normal_hint(u, pos)).reshape(6) @ N6) < 0.0:
            N6 = -N6
    elif np.linalg.det(np.vstack([comps, n4])) < 0.0:
        N6 = -N6
    return pos, N6


def parallel_chart(
    chart: Chart,
    s: float,
    normal_hint: Optional[NormalHint] = None,
    h1: float = H1_DEFAULT,
) -> tuple[Chart, NormalHint]:
    """The chart of the parallel hypersurface at distance ``s``.

    Returns the flowed chart together with a normal hint that orients its
    numerical normal along the parallel-transported one, so that scalars of
    the flowed surface are computed with a consistent sign.
    """
    cache: dict[bytes, tuple[ProductPoint, np.ndarray]] = {}

    def base_data(u):
        key = np.asarray(u, dtype=float).tobytes()
        val = cache.get(key)
        if val is None:
            val = _light_normal(chart, np.asarray(u, dtype=float), h1, normal_hint)
            cache[key] = val
        return val

    def ev(u):
        pos, N6 = base_data(u)
        return flow_point(pos, N6, s)

    def hint(u, pt):
        pos, N6 = base_data(u)
        return flow_normal(pos, N6, s)

    flowed = Chart(eval=ev, domain=chart.domain, label=f"{chart.label}||s={s:g}")
    return flowed, hint


# ---------------------------------------------------------------------------
# the adapted frame and the Q matrix


def adapted_frame(sd: ShapeData) -> np.ndarray:
    """Rows (E1, E2, E3): X/|X| and the normalized J1 N +- J2 N.

    When C^2 = 1 two of the vectors degenerate; the surviving direction is
    J1 N and the two remaining rows are completed orthonormally from the
    tangent frame (the flow factors are insensitive to that choice).
    """
    C = sd.C
    N = sd.N
    J1N = ambient.apply_J1(N).ambient
    J2N = ambient.apply_J2(N).ambient
    if 1.0 - C * C > DEGENERATE_C2:
        E1 = sd.X6 / np.linalg.norm(sd.X6)
        E2 = (J1N + J2N) / math.sqrt(2.0 * (1.0 + C))
        E3 = (J1N - J2N) / math.sqrt(2.0 * (1.0 - C))
        return np.array([E1, E2, E3])
    fixed = J1N / np.linalg.norm(J1N)
    others = []
    for e in sd.frame:
        w = e - (e @ fixed) * fixed
        for o in others:
            w = w - (w @ o) * o
        n = np.linalg.norm(w)
        if n > 1e-8:
            others.append(w / n)
        if len(others) == 2:
            break
    if len(others) < 2:
        raise PreconditionError("could not complete the degenerate adapted frame")
    if C > 0.0:
        return np.array([others[0], fixed, others[1]])
    return np.array([others[0], others[1], fixed])


@dataclass(frozen=True)
class QData:
    """The flow differential in the adapted frame at one distance s."""

    s: float
    C: float
    E: np.ndarray            # (3, 6) adapted frame rows
    sigma_e: np.ndarray      # (3, 3) second fundamental form in that frame
    Q: np.ndarray            # (3, 3)
    detQ: float
    detQ_closed: float
    ddetQ: float             # d(detQ)/ds, closed form

    @property
    def mean_curvature(self) -> float:
        """Mean curvature of the parallel surface, from the log-derivative."""
        return -self.ddetQ / (3.0 * self.detQ_closed)


def sigma_in_adapted_frame(sd: ShapeData) -> tuple[np.ndarray, np.ndarray]:
    E = adapted_frame(sd)
    T = E @ sd.frame.T
    return E, T @ sd.sigma @ T.T


def q_matrix(sd: ShapeData, s: float) -> QData:
    """Q(s) in the adapted frame, with its determinant two ways."""
    E, se = sigma_in_adapted_frame(sd)
    C = sd.C
    cp = math.sqrt(max(0.0, (1.0 + C) / 2.0))
    cm = math.sqrt(max(0.0, (1.0 - C) / 2.0))
    fp = _sinc_factor(cp, s)
    fm = _sinc_factor(cm, s)
    Q = np.zeros((3, 3))
    for i in range(3):
        Q[i, 0] = (1.0 if i == 0 else 0.0) - s * se[0, i]
        Q[i, 1] = (math.cos(cp * s) if i == 1 else 0.0) - se[1, i] * fp
        Q[i, 2] = (math.cos(cm * s) if i == 2 else 0.0) - se[2, i] * fm
    return QData(
        s=s,
        C=C,
        E=E,
        sigma_e=se,
        Q=Q,
        detQ=float(np.linalg.det(Q)),
        detQ_closed=detq_closed(se, C, s),
        ddetQ=detq_closed_deriv(se, C, s),
    )


def _minors(se: np.ndarray):
    H12 = se[0, 0] * se[1, 1] - se[0, 1] ** 2
    H13 = se[0, 0] * se[2, 2] - se[0, 2] ** 2
    H23 = se[1, 1] * se[2, 2] - se[1, 2] ** 2
    return H12, H13, H23


def detq_closed(se: np.ndarray, C: float, s: float) -> float:
    """det Q(s) in closed form from the adapted-frame components."""
    cp = math.sqrt(max(0.0, (1.0 + C) / 2.0))
    cm = math.sqrt(max(0.0, (1.0 - C) / 2.0))
    ccp, ccm = math.cos(cp * s), math.cos(cm * s)
    fp, fm = _sinc_factor(cp, s), _sinc_factor(cm, s)
    H12, H13, H23 = _minors(se)
    K = float(np.linalg.det(se))
    return (
        (1.0 - s * se[0, 0]) * ccp * ccm
        + (H23 - s * K) * fp * fm
        + (-se[1, 1] + s * H12) * fp * ccm
        + (-se[2, 2] + s * H13) * ccp * fm
    )


def detq_closed_deriv(se: np.ndarray, C: float, s: float) -> float:
    """d(det Q)/ds in closed form."""
    cp = math.sqrt(max(0.0, (1.0 + C) / 2.0))
    cm = math.sqrt(max(0.0, (1.0 - C) / 2.0))
    ccp, ccm = math.cos(cp * s), math.cos(cm * s)
    sp, sm = math.sin(cp * s), math.sin(cm * s)
    fp, fm = _sinc_factor(cp, s), _sinc_factor(cm, s)
    H12, H13, H23 = _minors(se)
    K = float(np.linalg.det(se))
    d = -se[0, 0] * ccp * ccm + (1.0 - s * se[0, 0]) * (-cp * sp * ccm - cm * ccp * sm)
    d += -K * fp * fm + (H23 - s * K) * (ccp * fm + fp * ccm)
    d += H12 * fp * ccm + (-se[1, 1] + s * H12) * (ccp * ccm - cm * fp * sm)
    d += H13 * ccp * fm + (-se[2, 2] + s * H13) * (-cp * sp * fm + ccp * ccm)
    return d


def taylor_detq(se: np.ndarray, C: float) -> np.ndarray:
    """Maclaurin coefficients c_0..c_6 of det Q(s) about s = 0."""
    s11, s22, s33 = se[0, 0], se[1, 1], se[2, 2]
    H12, H13, H23 = _minors(se)
    K = float(np.linalg.det(se))
    tr = s11 + s22 + s33
    H = tr / 3.0
    norm2 = float(np.sum(se * se))
    rho = 2.0 + 9.0 * H * H - norm2
    C2 = C * C
    c0 = 1.0
    c1 = -3.0 * H
    c2 = (rho - 3.0) / 2.0
    c3 = (9.0 * H - 6.0 * K - (1.0 + C) * s22 - (1.0 - C) * s33) / 6.0
    c4 = (
        2.0 - C2 - 4.0 * H23 - 4.0 * (2.0 - C) * H12 - 4.0 * (2.0 + C) * H13
    ) / 24.0
    c5 = (
        20.0 * K
        - 5.0 * (2.0 - C2) * s11
        - (4.0 - 2.0 * C - C2) * s22
        - (4.0 + 2.0 * C - C2) * s33
    ) / 120.0
    c6 = -(
        4.0
        - 3.0 * C2
        - (24.0 - 12.0 * C - 6.0 * C2) * H12
        - (24.0 + 12.0 * C - 6.0 * C2) * H13
        - (8.0 - 2.0 * C2) * H23
    ) / 720.0
    return np.array([c0, c1, c2, c3, c4, c5, c6])


# ---------------------------------------------------------------------------
# focal distances


@dataclass(frozen=True)
class FocalResult:
    """First zero of det Q along the normal, if any, plus diagnostics."""

    root: Optional[float]      # None means no focal point up to s_max
    s_max: float
    j1n_root: Optional[float]  # first zero of the J1 N column factor


def j1n_column_root(sd: ShapeData) -> Optional[float]:
    """First positive zero of cos(C+ s) - sigma(J1N, J1N) sin(C+ s)/C+."""
    J1N = ambient.apply_J1(sd.N).ambient
    J1N = J1N / np.linalg.norm(J1N)
    lam = sd.sigma_value(J1N, J1N)
    cp = math.sqrt(max(0.0, (1.0 + sd.C) / 2.0))
    if cp < 1e-8:
        return 1.0 / lam if lam > 1e-12 else None
    return math.atan2(cp, lam) / cp


def focal_radius(
    sd: ShapeData,
    s_max: float = S_MAX_DEFAULT,
    n_scan: int = 2000,
    iters: int = 60,
) -> FocalResult:
    """Smallest s in (0, s_max] with det Q(s) = 0, by scan plus bisection."""
    E, se = sigma_in_adapted_frame(sd)
    C = sd.C

    def f(s):
        return detq_closed(se, C, s)

    lo = 1e-4
    grid = np.linspace(lo, s_max, n_scan + 1)
    vals = [f(s) for s in grid]
    root = None
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            root = float(a)
            break
        if fa * fb < 0.0:
            x0, x1 = float(a), float(b)
            for _ in range(iters):
                mid = 0.5 * (x0 + x1)
                if f(x0) * f(mid) <= 0.0:
                    x1 = mid
                else:
                    x0 = mid
            root = 0.5 * (x0 + x1)
            break
    return FocalResult(root=root, s_max=s_max, j1n_root=j1n_column_root(sd))
