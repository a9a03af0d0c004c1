"""Closed-form geometry of S^2 and S^2 x S^2.

Points of the product live in R^6 as pairs of unit 3-vectors.  The module
provides the round metric, the two complex structures J1, J2, the parallel
product structure P(v1, v2) = (v1, -v2), the curvature tensor of the
product metric, the block isometry group, and the two canonical functions
F(p, q) = <p, q> and G(p, q) = <p, a> whose level sets generate the example
families, together with finite-difference gradient/Laplacian probes for
them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TangencyError

_UNIT_TOL = 1e-12
_TANGENT_TOL = 1e-10


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n < 1e-14:
        raise ValueError("cannot normalize a (near) zero vector")
    return v / n


@dataclass(frozen=True)
class SpherePoint:
    """A point of the unit 2-sphere; renormalized on construction."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).reshape(3)
        object.__setattr__(self, "coords", _unit(c))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


@dataclass(frozen=True)
class ProductPoint:
    """A point of S^2 x S^2, stored as its two unit factors."""

    p: SpherePoint
    q: SpherePoint

    @classmethod
    def from_ambient(cls, x: np.ndarray) -> "ProductPoint":
        x = np.asarray(x, dtype=float).reshape(6)
        return cls(SpherePoint(x[:3]), SpherePoint(x[3:]))

    @property
    def ambient(self) -> np.ndarray:
        return np.concatenate([self.p.coords, self.q.coords])


@dataclass(frozen=True)
class ProductTangent:
    """A tangent vector (v1, v2) of S^2 x S^2 at a base point."""

    base: ProductPoint
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        v1 = np.asarray(self.v1, dtype=float).reshape(3)
        v2 = np.asarray(self.v2, dtype=float).reshape(3)
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)
        if abs(float(self.base.p.coords @ v1)) > _TANGENT_TOL or abs(
            float(self.base.q.coords @ v2)
        ) > _TANGENT_TOL:
            raise TangencyError("vector is not tangent to S^2 x S^2 at its base point")

    @property
    def ambient(self) -> np.ndarray:
        return np.concatenate([self.v1, self.v2])

    def norm(self) -> float:
        return float(np.sqrt(self.v1 @ self.v1 + self.v2 @ self.v2))


def tangent(base: ProductPoint, ambient6: np.ndarray) -> ProductTangent:
    """Wrap an ambient 6-vector as a tangent vector at ``base``."""
    a = np.asarray(ambient6, dtype=float).reshape(6)
    return ProductTangent(base, a[:3], a[3:])


def project_tangent(base: ProductPoint, ambient6: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an ambient 6-vector onto T(S^2 x S^2)."""
    a = np.asarray(ambient6, dtype=float).reshape(6).copy()
    p = base.p.coords
    q = base.q.coords
    a[:3] -= (p @ a[:3]) * p
    a[3:] -= (q @ a[3:]) * q
    return a


def inner(s: ProductTangent, t: ProductTangent) -> float:
    return float(s.v1 @ t.v1 + s.v2 @ t.v2)


def _same_base(*ts: ProductTangent) -> None:
    x0 = ts[0].base.ambient
    for t in ts[1:]:
        if np.max(np.abs(t.base.ambient - x0)) > 1e-9:
            raise TangencyError("tangent vectors have mismatched base points")


# ---------------------------------------------------------------------------
# exponential map and tangent frames


def sphere_exp(p: SpherePoint, v: np.ndarray) -> SpherePoint:
    """Great-circle exponential map of the unit sphere."""
    v = np.asarray(v, dtype=float).reshape(3)
    if abs(float(p.coords @ v)) > _TANGENT_TOL * max(1.0, np.linalg.norm(v)):
        raise TangencyError("sphere_exp requires a tangent vector")
    r = np.linalg.norm(v)
    if r < 1e-15:
        return p
    return SpherePoint(np.cos(r) * p.coords + np.sin(r) * (v / r))


def product_exp(pt: ProductPoint, t: ProductTangent) -> ProductPoint:
    """Geodesic exponential of the product metric (factorwise great circles)."""
    return ProductPoint(sphere_exp(pt.p, t.v1), sphere_exp(pt.q, t.v2))


def sphere_tangent_basis(p: SpherePoint) -> tuple[np.ndarray, np.ndarray]:
    """A right-handed orthonormal basis (t1, t2) of T_p S^2, t1 x t2 = p."""
    c = p.coords
    a = np.array([1.0, 0.0, 0.0]) if abs(c[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    t1 = _unit(np.cross(c, a))
    t2 = np.cross(c, t1)
    return t1, t2


def product_tangent_basis(pt: ProductPoint) -> np.ndarray:
    """An oriented orthonormal basis of T(S^2 x S^2) as a (4, 6) array.

    The row order (t1_p, t2_p, t1_q, t2_q) fixes the orientation used for
    positively oriented frames throughout the package.
    """
    t1p, t2p = sphere_tangent_basis(pt.p)
    t1q, t2q = sphere_tangent_basis(pt.q)
    z = np.zeros(3)
    return np.array(
        [
            np.concatenate([t1p, z]),
            np.concatenate([t2p, z]),
            np.concatenate([z, t1q]),
            np.concatenate([z, t2q]),
        ]
    )


# ---------------------------------------------------------------------------
# product structure, complex structures, curvature


def apply_P(t: ProductTangent) -> ProductTangent:
    return ProductTangent(t.base, t.v1, -t.v2)


def apply_J1(t: ProductTangent) -> ProductTangent:
    p = t.base.p.coords
    q = t.base.q.coords
    return ProductTangent(t.base, np.cross(p, t.v1), np.cross(q, t.v2))


def apply_J2(t: ProductTangent) -> ProductTangent:
    p = t.base.p.coords
    q = t.base.q.coords
    return ProductTangent(t.base, np.cross(p, t.v1), -np.cross(q, t.v2))


def apply_P6(x6: np.ndarray) -> np.ndarray:
    out = np.asarray(x6, dtype=float).reshape(6).copy()
    out[3:] = -out[3:]
    return out


def curvature_R(
    v: ProductTangent, w: ProductTangent, x: ProductTangent, y: ProductTangent
) -> float:
    """Curvature tensor R(v, w, x, y) of the product metric."""
    _same_base(v, w, x, y)
    pv, pw = apply_P(v), apply_P(w)
    return 0.5 * (
        inner(v, y) * inner(w, x)
        - inner(v, x) * inner(w, y)
        + inner(pv, y) * inner(pw, x)
        - inner(pv, x) * inner(pw, y)
    )


def curvature_R6(v: np.ndarray, w: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """Same tensor on raw ambient 6-vectors (no base-point validation)."""
    pv, pw = apply_P6(v), apply_P6(w)
    return 0.5 * (
        (v @ y) * (w @ x) - (v @ x) * (w @ y) + (pv @ y) * (pw @ x) - (pv @ x) * (pw @ y)
    )


# ---------------------------------------------------------------------------
# isometries


@dataclass(frozen=True)
class AmbientIsometry:
    """Block isometry (p, q) -> (Ap, Bq), optionally preceded by the swap."""

    A: np.ndarray
    B: np.ndarray
    swap: bool = False

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float).reshape(3, 3)
        B = np.asarray(self.B, dtype=float).reshape(3, 3)
        for M in (A, B):
            if np.max(np.abs(M.T @ M - np.eye(3))) > _UNIT_TOL * 100:
                raise ValueError("isometry blocks must be orthogonal matrices")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)


def identity_isometry() -> AmbientIsometry:
    return AmbientIsometry(np.eye(3), np.eye(3))


def swap_isometry() -> AmbientIsometry:
    return AmbientIsometry(np.eye(3), np.eye(3), swap=True)


def apply_isometry(iso: AmbientIsometry, pt: ProductPoint) -> ProductPoint:
    if iso.swap:
        return ProductPoint(SpherePoint(iso.A @ pt.q.coords), SpherePoint(iso.B @ pt.p.coords))
    return ProductPoint(SpherePoint(iso.A @ pt.p.coords), SpherePoint(iso.B @ pt.q.coords))


def apply_isometry_tangent(iso: AmbientIsometry, t: ProductTangent) -> ProductTangent:
    base = apply_isometry(iso, t.base)
    if iso.swap:
        return ProductTangent(base, iso.A @ t.v2, iso.B @ t.v1)
    return ProductTangent(base, iso.A @ t.v1, iso.B @ t.v2)


def random_isometry(rng: np.random.Generator, allow_swap: bool = True) -> AmbientIsometry:
    def rand_o3():
        m = rng.standard_normal((3, 3))
        q, r = np.linalg.qr(m)
        return q * np.sign(np.diag(r))

    swap = bool(allow_swap and rng.integers(0, 2))
    return AmbientIsometry(rand_o3(), rand_o3(), swap=swap)


def random_point(rng: np.random.Generator) -> ProductPoint:
    return ProductPoint(
        SpherePoint(rng.standard_normal(3)), SpherePoint(rng.standard_normal(3))
    )


def random_tangent(rng: np.random.Generator, pt: ProductPoint) -> ProductTangent:
    return tangent(pt, project_tangent(pt, rng.standard_normal(6)))


# ---------------------------------------------------------------------------
# the two canonical functions and their isoparametric identities


def iso_F(pt: ProductPoint) -> float:
    """F(p, q) = <p, q>; regular level sets are the three-curvature family."""
    return float(pt.p.coords @ pt.q.coords)


def iso_G(pt: ProductPoint, a: SpherePoint) -> float:
    """G(p, q) = <p, a>; regular level sets are the circle-times-sphere family."""
    return float(pt.p.coords @ a.coords)


def ambient_grad_laplacian(f, pt: ProductPoint, h: float = 1e-4) -> tuple[float, float]:
    """(|grad f|^2, laplacian f) at ``pt`` by geodesic central differences.

    Differences run along the geodesics of an orthonormal tangent frame,
    with one Richardson extrapolation level on top of the O(h^2) stencils.
    """
    frame = product_tangent_basis(pt)
    f0 = f(pt)

    def along(e6, s):
        return f(product_exp(pt, tangent(pt, s * e6)))

    grad_sq = 0.0
    lap = 0.0
    for e6 in frame:
        fp, fm = along(e6, h), along(e6, -h)
        fp2, fm2 = along(e6, h / 2), along(e6, -h / 2)
        d_h = (fp - fm) / (2 * h)
        d_h2 = (fp2 - fm2) / h
        d1 = (4 * d_h2 - d_h) / 3
        s_h = (fp - 2 * f0 + fm) / h**2
        s_h2 = (fp2 - 2 * f0 + fm2) / (h / 2) ** 2
        d2 = (4 * s_h2 - s_h) / 3
        grad_sq += d1 * d1
        lap += d2
    return grad_sq, lap
