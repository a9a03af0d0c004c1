"""Closed-form spectral decomposition of symmetric 3x3 matrices.

Eigenvalues come from the trigonometric solution of the characteristic
cubic (no iteration); eigenvectors from cross products of rows of S - l*I,
with an orthogonal-complement fallback near degenerate spectra.
"""

from __future__ import annotations

import numpy as np

TIE_GAP = 1e-7


def sym3_eigenvalues(S: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix, sorted descending."""
    S = np.asarray(S, dtype=float).reshape(3, 3)
    p1 = S[0, 1] ** 2 + S[0, 2] ** 2 + S[1, 2] ** 2
    q = np.trace(S) / 3.0
    if p1 < 1e-30 * max(1.0, q * q):
        return np.sort(np.diag(S))[::-1]
    p2 = (S[0, 0] - q) ** 2 + (S[1, 1] - q) ** 2 + (S[2, 2] - q) ** 2 + 2.0 * p1
    p = np.sqrt(p2 / 6.0)
    B = (S - q * np.eye(3)) / p
    r = np.clip(np.linalg.det(B) / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    lam1 = q + 2.0 * p * np.cos(phi)
    lam3 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    lam2 = 3.0 * q - lam1 - lam3
    return np.array([lam1, lam2, lam3])


def _vector_for(S: np.ndarray, lam: float) -> np.ndarray | None:
    M = S - lam * np.eye(3)
    best = None
    best_n = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            c = np.cross(M[i], M[j])
            n = np.linalg.norm(c)
            if n > best_n:
                best_n = n
                best = c / n
    scale = max(np.max(np.abs(S)), 1.0)
    if best is None or best_n < 1e-10 * scale * scale:
        return None
    return best


def multiplicities(lams: np.ndarray, gap: float = TIE_GAP) -> list[int]:
    """Multiplicity pattern of a descending eigenvalue triple."""
    groups = [1]
    for k in range(1, 3):
        if lams[k - 1] - lams[k] < gap:
            groups[-1] += 1
        else:
            groups.append(1)
    return groups


def sym3_eig(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvector columns.

    The returned V satisfies S @ V = V @ diag(lams) with det(V) = +1.
    """
    S = np.asarray(S, dtype=float).reshape(3, 3)
    lams = sym3_eigenvalues(S)
    gaps = (lams[0] - lams[1], lams[1] - lams[2])
    V = np.zeros((3, 3))
    if min(gaps) > TIE_GAP:
        v1 = _vector_for(S, lams[0])
        v3 = _vector_for(S, lams[2])
        if v1 is None or v3 is None:
            return _eigh_sorted(S)
        # exact orthogonality by construction of the middle vector
        v3 = v3 - (v1 @ v3) * v1
        v3 /= np.linalg.norm(v3)
        V[:, 0] = v1
        V[:, 2] = v3
        V[:, 1] = np.cross(v3, v1)
    elif max(gaps) > TIE_GAP:
        # one simple eigenvalue; complete its vector to a basis
        simple = 0 if gaps[0] > TIE_GAP else 2
        v = _vector_for(S, lams[simple])
        if v is None:
            return _eigh_sorted(S)
        a = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        w1 = np.cross(v, a)
        w1 /= np.linalg.norm(w1)
        w2 = np.cross(v, w1)
        if simple == 0:
            V[:, 0], V[:, 1], V[:, 2] = v, w1, w2
        else:
            V[:, 0], V[:, 1], V[:, 2] = w1, w2, v
    else:
        V = np.eye(3)
    if np.linalg.det(V) < 0:
        V[:, 2] = -V[:, 2]
    return lams, V


def _eigh_sorted(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, V = np.linalg.eigh(S)
    order = np.argsort(w)[::-1]
    w = w[order]
    V = V[:, order]
    if np.linalg.det(V) < 0:
        V[:, 2] = -V[:, 2]
    return w, V
