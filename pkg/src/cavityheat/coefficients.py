"""Heat-trace coefficients of a cavity from boundary curvature moments.

The six expansion coefficients a_0..a_5 (of sum_n a_n t^((n-3)/2)) are
linear in eleven geometric moments: the volume, the boundary area, and
integrals of tr L, (tr L)^2, det L, (tr L)^3, tr L det L, (tr L)^4,
(tr L)^2 det L, (det L)^2 and tr L lap(tr L) over the boundary.  The
exact rational constants live in :mod:`cavityheat.tables`; floats enter
only here, multiplied by quadrature moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import QuadratureSpec, SurfaceModel, TopologyInfo
from .geometry.curvature import curvature_grid
from .geometry.quadrature import enclosed_volume
from .tables import MOMENT_SLOTS, em_exact, em_topology_term, form_exact

__all__ = [
    "Measurement",
    "GeometricMoments",
    "HeatCoefficientSet",
    "compute_moments",
    "em_coefficients",
    "form_coefficients",
    "gauss_bonnet_residual",
    "a3_local",
    "a3_local_kappa_variant",
    "DeltaA3",
    "delta_a3",
]

# powers of length carried by each moment, for scaling checks
MOMENT_DIMENSIONS = {
    "volume": 3, "area": 2, "trL": 1,
    "trL2": 0, "detL": 0,
    "trL3": -1, "trL_detL": -1,
    "trL4": -2, "trL2_detL": -2, "detL2": -2, "trL_lap_trL": -2,
}


@dataclass(frozen=True)
class Measurement:
    value: float
    error: float

    def __float__(self):
        return self.value

    def scaled(self, factor, error_factor=None):
        ef = abs(factor) if error_factor is None else error_factor
        return Measurement(self.value * factor, self.error * ef)


@dataclass(frozen=True)
class GeometricMoments:
    """The eleven curvature moments of a closed surface, with errors.

    ``trL_lap_trL`` is evaluated as minus the integral of
    |grad tr L|^2 (integration by parts on a closed surface), which
    needs only third-order embedding derivatives.
    """

    volume: Measurement
    area: Measurement
    trL: Measurement
    trL2: Measurement
    detL: Measurement
    trL3: Measurement
    trL_detL: Measurement
    trL4: Measurement
    trL2_detL: Measurement
    detL2: Measurement
    trL_lap_trL: Measurement

    def __getitem__(self, slot):
        return getattr(self, slot)

    def as_dict(self):
        return {s: {"value": self[s].value, "error": self[s].error}
                for s in MOMENT_DIMENSIONS}

    def scaled(self, s):
        """Moments of the same surface scaled by x -> s x (for checks)."""
        kw = {name: self[name].scaled(s ** dim)
              for name, dim in MOMENT_DIMENSIONS.items()}
        return GeometricMoments(**kw)


def _boundary_moments(model, quad):
    """One-pass evaluation of all boundary integrands at a node level."""
    names = ("area", "trL", "trL2", "detL", "trL3", "trL_detL",
             "trL4", "trL2_detL", "detL2", "grad_sq")
    totals = dict.fromkeys(names, 0.0)
    for chart in model.charts:
        U, V, W = quad.grid(chart)
        g = curvature_grid(chart, U, V, need_grad=True)
        w = g["w"]
        t, d, gs = g["trL"], g["detL"], g["grad_trL_sq"]
        fields = {
            "area": np.ones_like(t), "trL": t, "trL2": t * t, "detL": d,
            "trL3": t ** 3, "trL_detL": t * d,
            "trL4": t ** 4, "trL2_detL": t * t * d, "detL2": d * d,
            "grad_sq": gs,
        }
        for k, vals in fields.items():
            totals[k] += float(np.sum(W * w * vals))
    return totals


def compute_moments(model: SurfaceModel, quad: QuadratureSpec) -> GeometricMoments:
    """All eleven moments of a closed model, with refinement error bars."""
    coarse = _boundary_moments(model, quad)
    fine = _boundary_moments(model, quad.refined())
    vol = enclosed_volume(model, quad)

    def meas(key):
        return Measurement(fine[key], abs(fine[key] - coarse[key]))

    grad_sq = meas("grad_sq")
    return GeometricMoments(
        volume=Measurement(vol.value, vol.error),
        area=meas("area"), trL=meas("trL"), trL2=meas("trL2"),
        detL=meas("detL"), trL3=meas("trL3"), trL_detL=meas("trL_detL"),
        trL4=meas("trL4"), trL2_detL=meas("trL2_detL"), detL2=meas("detL2"),
        trL_lap_trL=Measurement(-grad_sq.value, grad_sq.error),
    )


@dataclass(frozen=True)
class HeatCoefficientSet:
    """Six heat-trace coefficients for one spectral problem.

    ``kind`` is "em" or "p0".."p3"; a_n carries dimension length^(3-n).
    """

    kind: str
    values: tuple
    errors: tuple
    provenance: str = "quadrature"

    def __post_init__(self):
        if len(self.values) != 6 or len(self.errors) != 6:
            raise ValueError("need exactly a_0..a_5")

    def __getitem__(self, n):
        return self.values[n]

    def as_dict(self):
        return {
            "kind": self.kind,
            "values": list(self.values),
            "errors": list(self.errors),
            "provenance": self.provenance,
        }

    def scaled(self, s):
        """Coefficients of the surface scaled by x -> s x: a_n -> s^(3-n) a_n."""
        return HeatCoefficientSet(
            kind=self.kind,
            values=tuple(a * s ** (3 - n) for n, a in enumerate(self.values)),
            errors=tuple(e * s ** (3 - n) for n, e in enumerate(self.errors)),
            provenance=self.provenance,
        )


def _assemble(exact_map, moments):
    values, errors = [], []
    for n in range(6):
        val = err = 0.0
        for slot in MOMENT_SLOTS[n]:
            entry = exact_map[n].get(slot)
            coeff = float(entry) if entry is not None else 0.0
            m = moments[slot]
            val += coeff * m.value
            err += abs(coeff) * m.error
        values.append(val)
        errors.append(err)
    return values, errors


def em_coefficients(moments: GeometricMoments,
                    topology: TopologyInfo) -> HeatCoefficientSet:
    """Electromagnetic cavity coefficients a_0..a_5.

    a_1 is exactly zero; a_3 combines the local curvature integral with
    the topological constant 1 - (1/2) sum_i (1 + g_i).
    """
    values, errors = _assemble(em_exact(), moments)
    values[1], errors[1] = 0.0, 0.0
    values[3] += float(em_topology_term(topology))
    return HeatCoefficientSet("em", tuple(values), tuple(errors))


def form_coefficients(p: int, moments: GeometricMoments) -> HeatCoefficientSet:
    """Coefficients of the degree-p form Laplacian (p = 0..3)."""
    values, errors = _assemble(form_exact(p), moments)
    return HeatCoefficientSet(f"p{p}", tuple(values), tuple(errors))


def gauss_bonnet_residual(moments: GeometricMoments,
                          topology: TopologyInfo):
    """integral(det L) - 4 pi sum_i(1 - g_i); zero within quadrature error."""
    target = 4.0 * math.pi * topology.euler_sum()
    return Measurement(moments.detL.value - target, moments.detL.error)


def a3_local(moments: GeometricMoments) -> Measurement:
    """Local (curvature-integral) part of the electromagnetic a_3.

    (1/64)(4 pi)^-1 * integral(3 (tr L)^2 - 4 det L); dimensionless and
    scale invariant.
    """
    pre = 1.0 / (64.0 * 4.0 * math.pi)
    val = pre * (3.0 * moments.trL2.value - 4.0 * moments.detL.value)
    err = pre * (3.0 * moments.trL2.error + 4.0 * moments.detL.error)
    return Measurement(val, err)


def a3_local_kappa_variant(moments: GeometricMoments) -> Measurement:
    """Alternative printed normalisation of the a_3 local part.

    (1/64) * integral(3/4 (k1^2 + k2^2) - k1 k2), i.e. without the
    (4 pi)^-1 and with a different det L weight.  For the unit ball this
    gives pi/32 instead of 1/8; it is *not* consistent with the p-form
    table routes or with spectral fits, and is reported for comparison
    only -- never substituted into downstream results.
    """
    # 3/4 (k1^2 + k2^2) - k1 k2 = 3/4 (tr L)^2 - 5/2 det L
    val = (0.75 * moments.trL2.value - 2.5 * moments.detL.value) / 64.0
    err = (0.75 * moments.trL2.error + 2.5 * moments.detL.error) / 64.0
    return Measurement(val, err)


@dataclass(frozen=True)
class DeltaA3:
    """Change of the total a_3 when a conducting surface is inserted.

    For a cavity with connected boundary of genus g inside a large ball,
    the three topological constants (cavity, complement shell, reference
    ball) are -(g-1)/2, -g/2 and +1/2; they sum to -g, while the local
    parts on the dividing surface double.  Hence delta a_3 =
    2 * a3_local - g, which is also the number of modes gained at finite
    frequency.
    """

    genus: int
    a3_local: float
    nonlocal_parts: tuple
    nonlocal_sum: Fraction
    value: float


def delta_a3(topology: TopologyInfo, a3_local_value) -> DeltaA3:
    if not topology.connected_boundary:
        raise ValueError(
            "delta_a3 is defined for a connected dividing surface only")
    g = topology.genera[0]
    parts = (-Fraction(g - 1, 2), -Fraction(g, 2), Fraction(1, 2))
    # cavity + shell - reference
    total = parts[0] + parts[1] - parts[2]
    assert total == -g
    a3l = float(a3_local_value)
    return DeltaA3(genus=g, a3_local=a3l, nonlocal_parts=parts,
                   nonlocal_sum=total, value=2.0 * a3l - g)
