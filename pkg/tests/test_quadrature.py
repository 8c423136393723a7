"""Surface quadrature: exact areas/volumes, Gauss-Bonnet, convergence."""

import math

import numpy as np
import pytest

from cavityheat.geometry import (
    EvaluationError,
    OrientationError,
    QuadratureSpec,
    SurfaceChart,
    SurfaceModel,
    TopologyInfo,
    curvature_grid,
    ellipsoid,
    enclosed_volume,
    grad_trL_sq_integral,
    sphere,
    surface_integral,
    torus,
    trL_lap_trL_integral,
)

Q16 = QuadratureSpec(order=16)
Q32 = QuadratureSpec(order=32)


def const_one(chart, U, V):
    return np.ones_like(U)


def det_L(chart, U, V):
    return curvature_grid(chart, U, V)["detL"]


class TestSurfaceIntegral:
    def test_sphere_area(self):
        res = surface_integral(sphere(1.0), const_one, Q16)
        assert res.value == pytest.approx(4 * math.pi, rel=1e-13)

    def test_sphere_total_curvature(self):
        res = surface_integral(sphere(1.0), det_L, Q16)
        assert res.value == pytest.approx(4 * math.pi, rel=1e-12)

    def test_torus_total_curvature_vanishes(self):
        res = surface_integral(torus(2.0, 0.5), det_L, Q16)
        assert abs(res.value) < 1e-12

    def test_ellipsoid_total_curvature(self):
        res = surface_integral(ellipsoid(1.0, 1.3, 1.7), det_L, Q32)
        assert res.value == pytest.approx(4 * math.pi, abs=1e-10)

    def test_torus_area(self):
        model = torus(2.0, 0.5)
        res = surface_integral(model, const_one, Q16)
        assert res.value == pytest.approx(model.closed_form_area, rel=1e-13)

    def test_torus_mean_curvature_integral(self):
        # integral of tr L over a torus is 4 pi^2 R, independent of the tube
        def tr_L(chart, U, V):
            return curvature_grid(chart, U, V)["trL"]

        res = surface_integral(torus(2.0, 0.5), tr_L, Q16)
        assert res.value == pytest.approx(4 * math.pi**2 * 2.0, rel=1e-12)

    def test_error_estimate_decays(self):
        model = ellipsoid(1.0, 1.3, 1.7)
        errs = [surface_integral(model, const_one, QuadratureSpec(order=n)).error
                for n in (6, 12, 24)]
        assert errs[0] > errs[1] > errs[2]

    def test_non_finite_integrand_reports_node(self):
        def bad(chart, U, V):
            out = np.ones_like(U)
            out[0, 0] = np.nan
            return out

        with pytest.raises(EvaluationError, match="non-finite"):
            surface_integral(sphere(1.0), bad, Q16)


class TestVolume:
    def test_unit_ball(self):
        assert enclosed_volume(sphere(1.0), Q16).value == pytest.approx(
            4 * math.pi / 3, rel=1e-13)

    def test_ellipsoid(self):
        assert enclosed_volume(ellipsoid(1.0, 1.0, 2.0), Q16).value == pytest.approx(
            8 * math.pi / 3, rel=1e-12)

    def test_torus_pappus(self):
        assert enclosed_volume(torus(2.0, 0.5), Q16).value == pytest.approx(
            math.pi**2, rel=1e-12)

    def test_outward_normal_rejected(self):
        chart = SurfaceChart.from_expressions(
            "sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)",
            u_range=(0, math.pi), v_range=(0, 2 * math.pi),
            periodic_v=True, normal_sign=1, name="inside-out",
        )
        model = SurfaceModel(name="inside-out", charts=(chart,),
                             topology=TopologyInfo(1, (0,)))
        with pytest.raises(OrientationError):
            enclosed_volume(model, Q16)


class TestGradLaplacianPair:
    # integration by parts on a closed surface:
    # integral(tr L * lap tr L) = -integral(|grad tr L|^2)
    @pytest.mark.parametrize("model", [ellipsoid(1.0, 1.0, 2.0),
                                       torus(2.0, 0.5),
                                       ellipsoid(1.0, 1.3, 1.7)])
    def test_antisymmetry(self, model):
        a = grad_trL_sq_integral(model, Q16).value
        b = trL_lap_trL_integral(model, Q16).value
        assert abs(a + b) < 1e-6 * max(abs(a), 1.0)

    def test_sphere_both_vanish(self):
        assert abs(grad_trL_sq_integral(sphere(1.0), Q16).value) < 1e-20
        assert abs(trL_lap_trL_integral(sphere(1.0), Q16).value) < 1e-9


class TestSpecValidation:
    def test_order_floor(self):
        with pytest.raises(ValueError):
            QuadratureSpec(order=3)

    def test_refine_floor(self):
        with pytest.raises(ValueError):
            QuadratureSpec(order=8, refine=1)
