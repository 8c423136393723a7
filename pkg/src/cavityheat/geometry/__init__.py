"""Surface geometry: charts, curvature, quadrature, tensor identities."""

from .charts import ChartError, SingularChartError, SurfaceChart
from .curvature import CurvatureSample, curvature_at, curvature_grid, lap_trL_grid
from .models import SurfaceModel, TopologyInfo, ellipsoid, sphere, torus
from .quadrature import (
    EvaluationError,
    IntegralResult,
    OrientationError,
    QuadratureSpec,
    enclosed_volume,
    grad_trL_sq_integral,
    surface_integral,
    trL_lap_trL_integral,
)

__all__ = [
    "ChartError",
    "SingularChartError",
    "SurfaceChart",
    "CurvatureSample",
    "curvature_at",
    "curvature_grid",
    "lap_trL_grid",
    "SurfaceModel",
    "TopologyInfo",
    "sphere",
    "ellipsoid",
    "torus",
    "EvaluationError",
    "IntegralResult",
    "OrientationError",
    "QuadratureSpec",
    "enclosed_volume",
    "grad_trL_sq_integral",
    "surface_integral",
    "trL_lap_trL_integral",
]
