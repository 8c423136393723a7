"""Curvature of parametric surfaces from the chart derivative oracle.

All quantities are computed pointwise from exact embedding derivatives:
first and second fundamental forms, the shape operator in an orthonormal
tangent frame, principal curvatures, the tangential gradient of the mean
curvature trace, and its Laplace-Beltrami (the latter by one level of
Richardson differences applied to an exactly evaluated metric flux, so
no fourth-order embedding derivatives are needed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import SingularChartError, SurfaceChart

__all__ = ["CurvatureSample", "curvature_at", "curvature_grid", "lap_trL_grid"]

# |r_u x r_v| / (|r_u||r_v|) below this means the parametrisation is
# effectively degenerate at the point.
_SINGULAR_SINE = 1e-10


def _dot(a, b):
    return np.einsum("i...,i...->...", a, b)


def _cross(a, b):
    return np.cross(a, b, axis=0)


def curvature_grid(chart: SurfaceChart, u, v, need_grad=False):
    """Evaluate curvature fields at an array of parameter points.

    Returns a dict of arrays: position ``r``, area element ``w``, inward
    unit normal ``n``, metric/shape data and, with ``need_grad``, the
    parameter derivatives ``Hu, Hv`` of tr L plus ``grad_trL_sq``, the
    squared tangential gradient |grad tr L|^2.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d = chart.deriv
    r = d(0, 0)(u, v)
    ru, rv = d(1, 0)(u, v), d(0, 1)(u, v)
    ruu, ruv, rvv = d(2, 0)(u, v), d(1, 1)(u, v), d(0, 2)(u, v)

    E, F, G = _dot(ru, ru), _dot(ru, rv), _dot(rv, rv)
    cross = _cross(ru, rv)
    w = np.sqrt(_dot(cross, cross))
    with np.errstate(invalid="ignore", divide="ignore"):
        sine = w / np.sqrt(E * G)
    sine = np.where(np.isfinite(sine), sine, 0.0)
    if not np.min(sine) >= _SINGULAR_SINE:
        k = np.unravel_index(int(np.argmin(sine)), np.shape(sine)) if np.ndim(sine) else ()
        ub = u[k] if np.ndim(u) else u
        vb = v[k] if np.ndim(v) else v
        raise SingularChartError(chart.name, float(ub), float(vb), float(np.min(sine)))

    n = chart.normal_sign * cross / w
    e = _dot(n, ruu)
    f = _dot(n, ruv)
    g2 = _dot(n, rvv)
    den = E * G - F * F
    trL = (e * G - 2.0 * f * F + g2 * E) / den
    detL = (e * g2 - f * f) / den

    out = {
        "r": r, "ru": ru, "rv": rv, "n": n, "w": w,
        "E": E, "F": F, "G": G, "e": e, "f": f, "g2": g2,
        "trL": trL, "detL": detL,
    }
    if not need_grad:
        return out

    # chain rule for H_d = d(tr L)/d(parameter); needs third derivatives
    r3 = {
        (3, 0): d(3, 0)(u, v), (2, 1): d(2, 1)(u, v),
        (1, 2): d(1, 2)(u, v), (0, 3): d(0, 3)(u, v),
    }
    H = trL
    Hd = {}
    for which in ("u", "v"):
        if which == "u":
            ru_d, rv_d = ruu, ruv
            ruu_d, ruv_d, rvv_d = r3[(3, 0)], r3[(2, 1)], r3[(1, 2)]
        else:
            ru_d, rv_d = ruv, rvv
            ruu_d, ruv_d, rvv_d = r3[(2, 1)], r3[(1, 2)], r3[(0, 3)]
        E_d = 2.0 * _dot(ru, ru_d)
        F_d = _dot(ru_d, rv) + _dot(ru, rv_d)
        G_d = 2.0 * _dot(rv, rv_d)
        cross_d = _cross(ru_d, rv) + _cross(ru, rv_d)
        w_d = _dot(cross, cross_d) / w
        n_d = chart.normal_sign * cross_d / w - n * (w_d / w)
        e_d = _dot(n_d, ruu) + _dot(n, ruu_d)
        f_d = _dot(n_d, ruv) + _dot(n, ruv_d)
        g2_d = _dot(n_d, rvv) + _dot(n, rvv_d)
        den_d = E_d * G + E * G_d - 2.0 * F * F_d
        Hd[which] = (e_d * G + e * G_d - 2.0 * (f_d * F + f * F_d)
                     + g2_d * E + g2 * E_d - H * den_d) / den

    out["Hu"], out["Hv"] = Hd["u"], Hd["v"]
    out["grad_trL_sq"] = (G * Hd["u"] ** 2 - 2.0 * F * Hd["u"] * Hd["v"]
                          + E * Hd["v"] ** 2) / den
    return out


def _flux_terms(chart, u, v):
    """The Laplace-Beltrami flux components P, Q of tr L.

    lap(tr L) = (d_u P + d_v Q) / w  with  P = (G H_u - F H_v)/w,
    Q = (E H_v - F H_u)/w; P and Q come out of the exact chain-rule
    pipeline, so only the single outer derivative is numerical.
    """
    g = curvature_grid(chart, u, v, need_grad=True)
    P = (g["G"] * g["Hu"] - g["F"] * g["Hv"]) / g["w"]
    Q = (g["E"] * g["Hv"] - g["F"] * g["Hu"]) / g["w"]
    return P, Q


def lap_trL_grid(chart: SurfaceChart, u, v, rel_step=1e-3):
    """Laplace-Beltrami of tr L by Richardson differences of the flux."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    hu = rel_step * chart.u_span
    hv = rel_step * chart.v_span

    def dP(h):
        return (_flux_terms(chart, u + h, v)[0] - _flux_terms(chart, u - h, v)[0]) / (2 * h)

    def dQ(h):
        return (_flux_terms(chart, u, v + h)[1] - _flux_terms(chart, u, v - h)[1]) / (2 * h)

    Pu = (4.0 * dP(hu / 2) - dP(hu)) / 3.0
    Qv = (4.0 * dQ(hv / 2) - dQ(hv)) / 3.0
    w = curvature_grid(chart, u, v)["w"]
    return (Pu + Qv) / w


@dataclass(frozen=True)
class CurvatureSample:
    """Curvature data at one surface point, in an orthonormal frame.

    ``L`` is the second fundamental form with respect to the inward
    normal; its eigenvalues are the principal curvatures
    ``kappa1 >= kappa2``.  ``grad_trL`` holds the frame components of
    the tangential gradient of tr L; ``lap_trL`` is filled on request.
    """

    point: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    normal: np.ndarray
    L: np.ndarray
    trL: float
    detL: float
    kappa1: float
    kappa2: float
    grad_trL: np.ndarray
    lap_trL: float | None = None

    def cayley_hamilton_residual(self):
        """|| L^2 - (tr L) L + (det L) I ||_max, zero for any 2x2 matrix."""
        res = self.L @ self.L - self.trL * self.L + self.detL * np.eye(2)
        return float(np.max(np.abs(res)))


def frame_matrix(E, F, G, w):
    """Rows express the Gram-Schmidt frame (e1, e2) in the (r_u, r_v) basis."""
    sE = np.sqrt(E)
    return np.array([[1.0 / sE, 0.0], [-F / (sE * w), sE / w]])


def curvature_at(chart: SurfaceChart, u, v, laplacian=False) -> CurvatureSample:
    """Curvature sample at a single parameter point of a chart.

    Raises ``SingularChartError`` when the immersion degenerates there.
    """
    u = float(u)
    v = float(v)
    g = curvature_grid(chart, u, v, need_grad=True)
    E, F, G, w = g["E"], g["F"], g["G"], g["w"]
    A = frame_matrix(E, F, G, w)
    II = np.array([[g["e"], g["f"]], [g["f"], g["g2"]]])
    L = A @ II @ A.T
    L = 0.5 * (L + L.T)
    trL = float(g["trL"])
    detL = float(g["detL"])
    mean = 0.5 * trL
    disc = np.sqrt(max(mean * mean - detL, 0.0))
    e1 = g["ru"] / np.sqrt(E)
    e2 = (E * g["rv"] - F * g["ru"]) / (np.sqrt(E) * w)
    grad = A @ np.array([g["Hu"], g["Hv"]])
    lap = float(lap_trL_grid(chart, u, v)) if laplacian else None
    return CurvatureSample(
        point=g["r"], e1=e1, e2=e2, normal=g["n"], L=L,
        trL=trL, detL=detL,
        kappa1=mean + disc, kappa2=mean - disc,
        grad_trL=grad, lap_trL=lap,
    )
