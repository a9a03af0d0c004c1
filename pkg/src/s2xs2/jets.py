"""Numerical 2-jets of charts into R^6.

The differentiation engine is oblivious to the geometry: it only sees a map
from a box in R^3 into ambient R^6.  First and second partials use central
differences at three nested steps with Richardson extrapolation, so the
returned derivatives are effectively O(h^4) accurate and carry an error
estimate from the disagreement of the two extrapolation levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ambient import ProductPoint
from .errors import DomainError, EvaluationError

H1_DEFAULT = 1e-3
H2_DEFAULT = 10 ** -2.5  # ~3.16e-3, balances truncation vs cancellation


@dataclass(frozen=True)
class Chart:
    """A local parametrization of a hypersurface of S^2 x S^2.

    ``eval`` maps a parameter triple inside ``domain`` (a (3, 2) array of
    [lo, hi] rows) to a ProductPoint and must be a pure, re-entrant function.
    """

    eval: Callable[[np.ndarray], ProductPoint]
    domain: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "domain", np.asarray(self.domain, dtype=float).reshape(3, 2))

    def ambient(self, u: np.ndarray) -> np.ndarray:
        return self.eval(np.asarray(u, dtype=float)).ambient

    def interior_margin(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=float)
        return float(np.min(np.minimum(u - self.domain[:, 0], self.domain[:, 1] - u)))


@dataclass(frozen=True)
class Jet2:
    """Position with first and second ambient partials of a chart."""

    pos: ProductPoint
    x: np.ndarray          # (6,) ambient position
    d1: np.ndarray         # (3, 6) first partials
    d2: np.ndarray         # (3, 3, 6) symmetric second partials
    h_used: tuple[float, float]
    err_est: float


def _richardson(vals_h, vals_h2, vals_h4):
    """Two Richardson levels on an O(h^2) stencil; returns (value, error)."""
    r1 = (4.0 * vals_h2 - vals_h) / 3.0
    r2 = (4.0 * vals_h4 - vals_h2) / 3.0
    return r2, float(np.max(np.abs(r2 - r1)))


def jet2(
    chart: Chart | Callable[[np.ndarray], np.ndarray],
    u: np.ndarray,
    h1: float = H1_DEFAULT,
    h2: float = H2_DEFAULT,
    order: int = 2,
) -> Jet2:
    """Numerical 2-jet of a chart (or a raw R^3 -> R^6 map) at ``u``."""
    u = np.asarray(u, dtype=float).reshape(3)
    if isinstance(chart, Chart):
        margin = chart.interior_margin(u)
        if margin < 2.0 * max(h1, h2):
            raise DomainError(
                f"parameter {u} within {margin:.2e} of the chart boundary; "
                f"need a margin of at least {2 * max(h1, h2):.2e}"
            )
        f = chart.ambient
    else:
        f = chart

    cache: dict[bytes, np.ndarray] = {}

    def ev(pt: np.ndarray) -> np.ndarray:
        key = pt.tobytes()
        val = cache.get(key)
        if val is None:
            val = np.asarray(f(pt), dtype=float).reshape(6)
            if not np.all(np.isfinite(val)):
                raise EvaluationError(f"chart evaluation returned non-finite values at {pt}")
            cache[key] = val
        return val

    x0 = ev(u)
    eye = np.eye(3)
    err = 0.0

    d1 = np.zeros((3, 6))
    for i in range(3):
        e = eye[i]
        ds = []
        for h in (h1, h1 / 2, h1 / 4):
            ds.append((ev(u + h * e) - ev(u - h * e)) / (2 * h))
        d1[i], e_i = _richardson(*ds)
        err = max(err, e_i)

    d2 = np.zeros((3, 3, 6))
    if order < 2:
        pos = ProductPoint.from_ambient(x0)
        return Jet2(pos=pos, x=x0, d1=d1, d2=d2, h_used=(h1, h2), err_est=err)
    for i in range(3):
        e = eye[i]
        ss = []
        for h in (h2, h2 / 2, h2 / 4):
            ss.append((ev(u + h * e) - 2 * x0 + ev(u - h * e)) / h**2)
        d2[i, i], e_i = _richardson(*ss)
        err = max(err, e_i)
    for i in range(3):
        for j in range(i + 1, 3):
            ei, ej = eye[i], eye[j]
            ms = []
            for h in (h2, h2 / 2, h2 / 4):
                ms.append(
                    (
                        ev(u + h * (ei + ej))
                        - ev(u + h * (ei - ej))
                        - ev(u - h * (ei - ej))
                        + ev(u - h * (ei + ej))
                    )
                    / (4 * h**2)
                )
            d2[i, j], e_ij = _richardson(*ms)
            d2[j, i] = d2[i, j]
            err = max(err, e_ij)

    pos = ProductPoint.from_ambient(x0)
    return Jet2(pos=pos, x=x0, d1=d1, d2=d2, h_used=(h1, h2), err_est=err)
