"""Per-point extrinsic geometry of a chart-parametrized hypersurface.

``shape_at`` turns a numerical 2-jet into the full extrinsic package at one
point: orthonormal tangent frame, unit normal, second fundamental form and
its spectrum, the product-structure scalars C, X and the P-matrix in the
frame.  The remaining functions check, by finite differences of that
pipeline over a chart stencil, every first-order identity the package
relies on: the gradient/Hessian/Laplacian relations between C, X and the
shape operator, the Codazzi equation, the characteristic polynomial of the
principal curvatures, and the linear system constraining the functions
Lambda_i = b_i^2 - C*P_ii in a principal frame with distinct curvatures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import ambient
from .ambient import ProductPoint, ProductTangent, apply_P6, curvature_R6
from .eigen import multiplicities, sym3_eigenvalues, sym3_eig
from .errors import (
    DegenerateSpectrumError,
    FrameContinuityError,
    PreconditionError,
    SingularChartError,
)
from .jets import Chart, Jet2, jet2, H1_DEFAULT, H2_DEFAULT

RANK_TOL = 1e-6
FIELD_STEP = 1e-3

NormalHint = Callable[[np.ndarray, ProductPoint], np.ndarray]


@dataclass
class ShapeData:
    """Extrinsic data of a hypersurface at a single chart point."""

    u: np.ndarray
    point: ProductPoint
    frame: np.ndarray        # (3, 6) orthonormal tangent rows e1, e2, e3
    N6: np.ndarray           # (6,) unit normal, tangent to S^2 x S^2
    sigma: np.ndarray        # (3, 3) second fundamental form in the frame
    lambdas: np.ndarray      # principal curvatures, descending
    mult: list[int]          # multiplicity pattern of the spectrum
    H: float                 # mean curvature, trace(sigma)/3
    rho: float               # scalar curvature, 2 + 9H^2 - |sigma|^2
    K: float                 # Gauss-Kronecker curvature, det(sigma)
    C: float                 # <PN, N>
    X6: np.ndarray           # (6,) tangential part of PN
    b: np.ndarray            # (3,) components <X, e_i>
    Pij: np.ndarray          # (3, 3) components <P e_i, e_j>
    Lambda: np.ndarray       # (3,) b_i^2 - C * P_ii in the stored frame
    # chart-level data kept for stencil work
    jet: Jet2
    d1: np.ndarray           # (3, 6) raw first partials
    d1t: np.ndarray          # (3, 6) partials projected to T(S^2 x S^2)
    g: np.ndarray            # (3, 3) induced metric in chart coordinates
    ginv: np.ndarray
    L: np.ndarray            # frame = L @ d1t (Gram-Schmidt transform)
    sff_chart: np.ndarray    # (3, 3) second fundamental form, chart basis

    @property
    def N(self) -> ProductTangent:
        return ambient.tangent(self.point, self.N6)

    @property
    def X(self) -> ProductTangent:
        return ambient.tangent(self.point, self.X6)

    def frame_tangents(self) -> list[ProductTangent]:
        return [ambient.tangent(self.point, e) for e in self.frame]

    def tangent_components(self, v6: np.ndarray) -> np.ndarray:
        """Components of an ambient tangent vector in the stored frame."""
        return self.frame @ np.asarray(v6, dtype=float).reshape(6)

    def chart_components(self, v6: np.ndarray) -> np.ndarray:
        """Components of a tangent vector in the chart coordinate basis."""
        return self.ginv @ (self.d1t @ np.asarray(v6, dtype=float).reshape(6))

    def sigma_value(self, v6: np.ndarray, w6: np.ndarray) -> float:
        a = self.tangent_components(v6)
        c = self.tangent_components(w6)
        return float(a @ self.sigma @ c)


def shape_at(
    chart: Chart,
    u: np.ndarray,
    h1: float = H1_DEFAULT,
    h2: float = H2_DEFAULT,
    normal_hint: Optional[NormalHint] = None,
) -> ShapeData:
    """Full extrinsic package at chart parameter ``u``.

    ``normal_hint(u, point)`` may supply an ambient vector whose sign fixes
    the orientation of the unit normal; without it the normal is oriented so
    that (e1, e2, e3, N) is positive for the package-wide orientation of
    T(S^2 x S^2).
    """
    u = np.asarray(u, dtype=float).reshape(3)
    jet = jet2(chart, u, h1=h1, h2=h2)
    pos = jet.pos

    d1t = np.array([ambient.project_tangent(pos, row) for row in jet.d1])
    sv = np.linalg.svd(d1t, compute_uv=False)
    if sv[-1] <= RANK_TOL:
        raise SingularChartError(
            f"chart differential is rank deficient at {u} "
            f"(smallest singular value {sv[-1]:.3e})",
            smallest_singular_value=float(sv[-1]),
        )

    g = jet.d1 @ jet.d1.T
    gt = d1t @ d1t.T
    R = np.linalg.cholesky(gt)
    L = np.linalg.inv(R)
    frame = L @ d1t  # orthonormal rows

    # unit normal: tangent to the product, orthogonal to the frame
    T4 = ambient.product_tangent_basis(pos)
    comps = frame @ T4.T                      # (3, 4)
    _, _, vt = np.linalg.svd(comps)
    n4 = vt[-1]
    N6 = n4 @ T4
    N6 /= np.linalg.norm(N6)
    if normal_hint is not None:
        hint = np.asarray(normal_hint(u, pos), dtype=float).reshape(6)
        if float(hint @ N6) < 0.0:
            N6 = -N6
    else:
        if np.linalg.det(np.vstack([comps, n4])) < 0.0:
            N6 = -N6

    sff_chart = jet.d2 @ N6                   # (3, 3)
    sigma = L @ sff_chart @ L.T
    sigma = 0.5 * (sigma + sigma.T)

    lambdas = sym3_eigenvalues(sigma)
    H = float(np.trace(sigma)) / 3.0
    K = float(np.linalg.det(sigma))
    rho = 2.0 + 9.0 * H * H - float(np.sum(sigma * sigma))

    PN6 = apply_P6(N6)
    C = float(PN6 @ N6)
    X6 = PN6 - C * N6
    b = frame @ X6
    Pe = np.array([apply_P6(e) for e in frame])
    Pij = Pe @ frame.T
    Pij = 0.5 * (Pij + Pij.T)
    Lambda = b * b - C * np.diag(Pij)

    return ShapeData(
        u=u,
        point=pos,
        frame=frame,
        N6=N6,
        sigma=sigma,
        lambdas=lambdas,
        mult=multiplicities(lambdas),
        H=H,
        rho=rho,
        K=K,
        C=C,
        X6=X6,
        b=b,
        Pij=Pij,
        Lambda=Lambda,
        jet=jet,
        d1=jet.d1,
        d1t=d1t,
        g=g,
        ginv=np.linalg.inv(g),
        L=L,
        sff_chart=sff_chart,
    )


# ---------------------------------------------------------------------------
# curvature of tangent planes via the Gauss equation


def _as6(v) -> np.ndarray:
    if isinstance(v, ProductTangent):
        return v.ambient
    return np.asarray(v, dtype=float).reshape(6)


def gauss_sectional(sd: ShapeData, v, w) -> float:
    """Sectional curvature of span{v, w} for an orthonormal tangent pair."""
    v6, w6 = _as6(v), _as6(w)
    if (
        abs(v6 @ v6 - 1.0) > 1e-6
        or abs(w6 @ w6 - 1.0) > 1e-6
        or abs(v6 @ w6) > 1e-6
    ):
        raise PreconditionError("gauss_sectional expects an orthonormal pair")
    return (
        curvature_R6(v6, w6, w6, v6)
        + sd.sigma_value(v6, v6) * sd.sigma_value(w6, w6)
        - sd.sigma_value(v6, w6) ** 2
    )


def ricci(sd: ShapeData, v) -> float:
    """Ricci curvature Ric(v, v) of the hypersurface for a unit tangent v."""
    v6 = _as6(v)
    total = 0.0
    for a in range(3):
        e = sd.frame[a]
        total += (
            curvature_R6(v6, e, e, v6)
            + sd.sigma_value(v6, v6) * sd.sigma[a, a]
            - sd.sigma_value(v6, e) ** 2
        )
    return total


def char_poly_residual(sd: ShapeData) -> float:
    """Residual of the characteristic cubic at each principal curvature."""
    lam = sd.lambdas
    vals = lam**3 - 3.0 * sd.H * lam**2 + 0.5 * (sd.rho - 2.0) * lam - sd.K
    return float(np.max(np.abs(vals)))


# ---------------------------------------------------------------------------
# stencil fields: derivatives of the pipeline over the chart


@dataclass
class _DiffFields:
    """Center data plus chart-coordinate derivatives of the shape pipeline."""

    sd: ShapeData
    steps: np.ndarray         # (3,) per-axis stencil steps (metric adapted)
    dC: np.ndarray            # (3,) coordinate partials of C
    d2C: np.ndarray           # (3, 3) coordinate second partials of C
    dH: np.ndarray            # (3,)
    dX: np.ndarray            # (3, 6) coordinate partials of the X field
    Gamma_chart: np.ndarray   # (3, 3, 3) Christoffels Gamma^l_{ki} -> [k, i, l]
    hessC: np.ndarray         # (3, 3) covariant Hessian of C, chart basis
    nabla_sigma: np.ndarray   # (3, 3, 3) (nabla sigma)_{kij}, chart basis
    axis: dict                # (k, +-1) -> ShapeData on the axis stencil


def _light_C(chart: Chart, u, h1, normal_hint) -> float:
    """C at ``u`` from a first-order jet only (no second partials)."""
    jet = jet2(chart, u, h1=h1, h2=h1, order=1)
    pos = jet.pos
    d1t = np.array([ambient.project_tangent(pos, row) for row in jet.d1])
    R = np.linalg.cholesky(d1t @ d1t.T)
    frame = np.linalg.inv(R) @ d1t
    T4 = ambient.product_tangent_basis(pos)
    comps = frame @ T4.T
    _, _, vt = np.linalg.svd(comps)
    N6 = vt[-1] @ T4
    N6 /= np.linalg.norm(N6)
    # C is sign-independent in N
    return float(apply_P6(N6) @ N6)


def diff_fields(
    chart: Chart,
    u: np.ndarray,
    normal_hint: Optional[NormalHint] = None,
    step: float = FIELD_STEP,
    h1: float = H1_DEFAULT,
    h2: float = H2_DEFAULT,
) -> _DiffFields:
    u = np.asarray(u, dtype=float).reshape(3)
    sd = shape_at(chart, u, h1=h1, h2=h2, normal_hint=normal_hint)
    eye = np.eye(3)

    # unit-speed steps: short coordinate directions otherwise amplify the
    # finite-difference noise by the inverse metric
    steps = np.clip(step / np.sqrt(np.diag(sd.g)), step, 30.0 * step)

    axis: dict = {}
    for k in range(3):
        for s in (1, -1, 0.5, -0.5):
            axis[(k, s)] = shape_at(
                chart, u + s * steps[k] * eye[k], h1=h1, h2=h2, normal_hint=normal_hint
            )

    def d1r(fp, fm, fph, fmh, h):
        # one Richardson level on the O(h^2) central difference
        return (4.0 * (fph - fmh) / h - (fp - fm) / (2.0 * h)) / 3.0

    dC = np.zeros(3)
    dH = np.zeros(3)
    dX = np.zeros((3, 6))
    dsff = np.zeros((3, 3, 3))
    d2C = np.zeros((3, 3))
    for k in range(3):
        h = steps[k]
        sp, sm = axis[(k, 1)], axis[(k, -1)]
        sph, smh = axis[(k, 0.5)], axis[(k, -0.5)]
        dC[k] = d1r(sp.C, sm.C, sph.C, smh.C, h)
        dH[k] = d1r(sp.H, sm.H, sph.H, smh.H, h)
        dX[k] = d1r(sp.X6, sm.X6, sph.X6, smh.X6, h)
        dsff[k] = d1r(sp.sff_chart, sm.sff_chart, sph.sff_chart, smh.sff_chart, h)
        # plain stencil: Richardson would amplify the pipeline noise here
        d2C[k, k] = (sp.C - 2 * sd.C + sm.C) / h**2

    # mixed second partials of C from a light, first-order-only evaluation
    for i in range(3):
        for j in range(i + 1, 3):
            vals = {}
            for si in (1, -1):
                for sj in (1, -1):
                    du = u + si * steps[i] * eye[i] + sj * steps[j] * eye[j]
                    vals[(si, sj)] = _light_C(chart, du, h1, normal_hint)
            d2C[i, j] = (
                vals[(1, 1)] - vals[(1, -1)] - vals[(-1, 1)] + vals[(-1, -1)]
            ) / (4 * steps[i] * steps[j])
            d2C[j, i] = d2C[i, j]

    # Christoffel symbols of the induced metric from the center jet alone:
    # dg[k][i, j] = <d2_{ki}, d1_j> + <d1_i, d2_{kj}>
    dg = np.einsum("kia,ja->kij", sd.jet.d2, sd.d1) + np.einsum(
        "ia,kja->kij", sd.d1, sd.jet.d2
    )
    Gamma_chart = 0.5 * np.einsum(
        "lm,kim->kil", sd.ginv, dg.transpose(0, 1, 2) + dg.transpose(1, 0, 2) - dg.transpose(2, 1, 0)
    )

    hessC = d2C - np.einsum("ijl,l->ij", Gamma_chart, dC)

    sff = sd.sff_chart
    nabla_sigma = (
        dsff
        - np.einsum("kil,lj->kij", Gamma_chart, sff)
        - np.einsum("kjl,il->kij", Gamma_chart, sff)
    )

    return _DiffFields(
        sd=sd,
        steps=steps,
        dC=dC,
        d2C=d2C,
        dH=dH,
        dX=dX,
        Gamma_chart=Gamma_chart,
        hessC=hessC,
        nabla_sigma=nabla_sigma,
        axis=axis,
    )


@dataclass
class StructureResiduals:
    """Residuals of the four first-order identities tying C, X and A."""

    grad: float        # |grad C + 2 A X|
    hessian: float     # Hessian identity, max entry in the frame
    laplacian: float   # Laplacian identity
    divergence: float  # div X - 3CH + tr(P^T A)

    def max(self) -> float:
        return max(self.grad, self.hessian, self.laplacian, self.divergence)


def lemma_residuals(
    chart: Chart,
    u: np.ndarray,
    normal_hint: Optional[NormalHint] = None,
    step: float = FIELD_STEP,
    fields: Optional[_DiffFields] = None,
) -> StructureResiduals:
    """Residuals of the gradient, Hessian, Laplacian and divergence identities."""
    F = fields or diff_fields(chart, u, normal_hint=normal_hint, step=step)
    sd = F.sd

    grad_C6 = np.einsum("kl,l,ka->a", sd.ginv, F.dC, sd.d1t)
    AX6 = (sd.sigma @ sd.b) @ sd.frame
    res_grad = float(np.linalg.norm(grad_C6 + 2.0 * AX6))

    x_chart = sd.chart_components(sd.X6)
    hess_frame = sd.L @ F.hessC @ sd.L.T
    ns_vXw = np.einsum("ak,i,bj,kij->ab", sd.L, x_chart, sd.L, F.nabla_sigma)
    sig2 = sd.sigma @ sd.sigma
    rhs = -2.0 * ns_vXw - 2.0 * sd.C * sig2 + 2.0 * (sd.sigma @ sd.Pij @ sd.sigma)
    res_hess = float(np.max(np.abs(hess_frame - rhs)))

    lap_C = float(np.einsum("ij,ij->", sd.ginv, F.hessC))
    X_dH = float(x_chart @ F.dH)
    sig_norm2 = float(np.sum(sd.sigma * sd.sigma))
    tr_PA2 = float(np.trace(sd.Pij.T @ sig2))
    res_lap = abs(lap_C + 6.0 * X_dH + 2.0 * sd.C * sig_norm2 - 2.0 * tr_PA2)

    div_X = float(np.einsum("kl,ka,la->", sd.ginv, F.dX, sd.d1t))
    tr_PA = float(np.trace(sd.Pij.T @ sd.sigma))
    res_div = abs(div_X - 3.0 * sd.C * sd.H + tr_PA)

    return StructureResiduals(
        grad=res_grad, hessian=res_hess, laplacian=res_lap, divergence=res_div
    )


def codazzi_residual(
    chart: Chart,
    u: np.ndarray,
    v,
    w,
    x,
    normal_hint: Optional[NormalHint] = None,
    step: float = FIELD_STEP,
    fields: Optional[_DiffFields] = None,
) -> float:
    """Residual of the Codazzi equation on the tangent triple (v, w, x)."""
    F = fields or diff_fields(chart, u, normal_hint=normal_hint, step=step)
    sd = F.sd
    v6, w6, x6 = _as6(v), _as6(w), _as6(x)
    vc, wc, xc = (sd.chart_components(t) for t in (v6, w6, x6))
    ns = F.nabla_sigma
    lhs = float(np.einsum("k,i,j,kij->", vc, wc, xc, ns)) - float(
        np.einsum("k,i,j,kij->", wc, vc, xc, ns)
    )
    rhs = 0.5 * (
        (sd.X6 @ v6) * (apply_P6(w6) @ x6) - (sd.X6 @ w6) * (apply_P6(v6) @ x6)
    )
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# principal frames with distinct curvatures


@dataclass
class FrameDerivatives:
    """Connection data of a principal frame with three distinct curvatures."""

    lambdas: np.ndarray       # descending principal curvatures
    directions: np.ndarray    # (3, 6) principal tangent rows
    Gamma: np.ndarray         # (3, 3, 3): <nabla_{E_i} E_j, E_k>
    nabla_sigma: np.ndarray   # (3, 3, 3) in the principal frame
    Lambda: np.ndarray        # (3,) b_i^2 - C * P_ii, principal frame
    B: np.ndarray             # (3, 3) coefficient matrix of the linear system
    B0: np.ndarray            # (3,)
    D: np.ndarray             # (3,) connection correction terms
    residual: np.ndarray      # (3,) B @ Lambda - B0 - D

    @property
    def detB(self) -> float:
        return float(np.linalg.det(self.B))

    @property
    def detB_closed(self) -> float:
        l1, l2, l3 = self.lambdas
        return -6.0 * (l1 - l2) * (l1 - l3) * (l2 - l3)

    def gamma_antisymmetry(self) -> float:
        return float(np.max(np.abs(self.Gamma + self.Gamma.transpose(0, 2, 1))))


def principal_directions(sd: ShapeData) -> np.ndarray:
    """Principal tangent directions as (3, 6) rows, sorted by curvature."""
    _, V = sym3_eig(sd.sigma)
    return V.T @ sd.frame


def lambda_system(
    chart: Chart,
    u: np.ndarray,
    normal_hint: Optional[NormalHint] = None,
    step: float = FIELD_STEP,
    gap_tol: float = 1e-4,
    fields: Optional[_DiffFields] = None,
) -> FrameDerivatives:
    """Assemble the linear system constraining Lambda_i in a principal frame.

    Requires three distinct principal curvatures at ``u`` and a principal
    frame that stays sign-consistent over the finite-difference stencil.
    """
    F = fields or diff_fields(chart, u, normal_hint=normal_hint, step=step)
    sd = F.sd
    lam = sd.lambdas
    if min(lam[0] - lam[1], lam[1] - lam[2]) < gap_tol:
        raise DegenerateSpectrumError(
            f"principal curvatures {lam} are not pairwise distinct (gap < {gap_tol})"
        )

    W0 = principal_directions(sd)
    dW = np.zeros((3, 3, 6))
    for k in range(3):
        aligned = {}
        for s in (1, -1, 0.5, -0.5):
            Ws = principal_directions(F.axis[(k, s)])
            for i in range(3):
                d = float(Ws[i] @ W0[i])
                if abs(d) < 0.5:
                    raise FrameContinuityError(
                        f"principal direction {i} rotated too far across the stencil"
                    )
                if d < 0.0:
                    Ws[i] = -Ws[i]
            aligned[s] = Ws
        h = F.steps[k]
        dW[k] = (
            4.0 * (aligned[0.5] - aligned[-0.5]) / h
            - (aligned[1] - aligned[-1]) / (2.0 * h)
        ) / 3.0

    # directional derivatives along the principal frame itself
    a = np.array([sd.chart_components(W0[i]) for i in range(3)])  # (3, 3)
    DV = np.einsum("ik,kjb->ijb", a, dW)           # D_i V_j, ambient
    Gamma = np.einsum("ijb,kb->ijk", DV, W0)

    # independent route to nabla sigma in the principal frame
    ns_p = np.einsum("xk,yi,zj,kij->xyz", a, a, a, F.nabla_sigma)

    b_p = W0 @ sd.X6
    P_p = np.array([float(apply_P6(W0[i]) @ W0[i]) for i in range(3)])
    Lam = b_p * b_p - sd.C * P_p

    l1, l2, l3 = lam
    B = np.array(
        [
            [l2, -l1, 2.0 * (l1 - l2)],
            [l3, 2.0 * (l1 - l3), -l1],
            [2.0 * (l2 - l3), l3, -l2],
        ]
    )
    B0 = np.array(
        [
            (l1 - l2) * (1.0 + 2.0 * l1 * l2),
            (l1 - l3) * (1.0 + 2.0 * l1 * l3),
            (l2 - l3) * (1.0 + 2.0 * l2 * l3),
        ]
    )

    def d_entry(i, j, k):
        return (
            4.0 * (lam[i] - lam[j]) * (Gamma[i, i, j] ** 2 + Gamma[j, j, i] ** 2)
            + 4.0 * (lam[k] - lam[j]) * Gamma[i, j, k] ** 2
            - 4.0 * (lam[k] - lam[i]) * Gamma[j, i, k] ** 2
        )

    D = np.array([d_entry(0, 1, 2), d_entry(0, 2, 1), d_entry(1, 2, 0)])
    residual = B @ Lam - B0 - D

    return FrameDerivatives(
        lambdas=lam,
        directions=W0,
        Gamma=Gamma,
        nabla_sigma=ns_p,
        Lambda=Lam,
        B=B,
        B0=B0,
        D=D,
        residual=residual,
    )
