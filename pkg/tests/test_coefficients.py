"""Coefficient evaluation on concrete surfaces.

Unit-ball reference values, hand-derived from the curvature formulas
with tr L = 2, det L = 1, area 4 pi, volume 4 pi / 3, genus 0:

    a_0 = 1/(3 sqrt(pi))      a_1 = 0
    a_2 = -4/(3 sqrt(pi))     a_3 = 1/8 + 1/2 = 5/8
    a_4 = -16/(315 sqrt(pi))  a_5 = 1/320
"""

import math
from fractions import Fraction

import pytest

from cavityheat.coefficients import (
    GeometricMoments,
    Measurement,
    a3_local,
    a3_local_kappa_variant,
    compute_moments,
    delta_a3,
    em_coefficients,
    form_coefficients,
    gauss_bonnet_residual,
)
from cavityheat.geometry import QuadratureSpec, TopologyInfo, ellipsoid, sphere, torus

SQPI = math.sqrt(math.pi)
BALL_EM = (1 / (3 * SQPI), 0.0, -4 / (3 * SQPI), 5 / 8, -16 / (315 * SQPI), 1 / 320)

Q16 = QuadratureSpec(order=16)


@pytest.fixture(scope="module")
def ball_moments():
    return compute_moments(sphere(1.0), Q16)


@pytest.fixture(scope="module")
def torus_moments():
    return compute_moments(torus(2.0, 0.5), Q16)


def synthetic_moments(**overrides):
    """Moments with every value zero except the given ones (exact)."""
    kw = {name: Measurement(0.0, 0.0) for name in (
        "volume", "area", "trL", "trL2", "detL", "trL3", "trL_detL",
        "trL4", "trL2_detL", "detL2", "trL_lap_trL")}
    for k, val in overrides.items():
        kw[k] = Measurement(float(val), 0.0)
    return GeometricMoments(**kw)


class TestMoments:
    def test_unit_ball_values(self, ball_moments):
        m = ball_moments
        assert m.volume.value == pytest.approx(4 * math.pi / 3, rel=1e-13)
        assert m.area.value == pytest.approx(4 * math.pi, rel=1e-13)
        assert m.trL.value == pytest.approx(8 * math.pi, rel=1e-13)
        assert m.trL2.value == pytest.approx(16 * math.pi, rel=1e-13)
        assert m.detL.value == pytest.approx(4 * math.pi, rel=1e-13)
        assert m.trL_detL.value == pytest.approx(8 * math.pi, rel=1e-13)
        assert m.trL_lap_trL.value == pytest.approx(0.0, abs=1e-18)

    def test_scaling_homogeneity(self, ball_moments):
        big = compute_moments(sphere(2.0), Q16)
        scaled = ball_moments.scaled(2.0)
        for name in ("volume", "area", "trL", "trL2", "detL", "trL3",
                     "trL4", "detL2"):
            assert big[name].value == pytest.approx(scaled[name].value, rel=1e-12)

    def test_torus_gauss_bonnet(self, torus_moments):
        assert abs(torus_moments.detL.value) < 1e-12


class TestEmCoefficients:
    def test_unit_ball_closed_forms(self, ball_moments):
        coeffs = em_coefficients(ball_moments, TopologyInfo(1, (0,)))
        for got, want in zip(coeffs.values, BALL_EM):
            assert got == pytest.approx(want, rel=1e-12, abs=1e-15)

    def test_a1_is_exactly_zero(self, ball_moments):
        coeffs = em_coefficients(ball_moments, TopologyInfo(1, (0,)))
        assert coeffs[1] == 0.0
        assert coeffs.errors[1] == 0.0

    def test_genus_two_synthetic_topology_term(self):
        coeffs = em_coefficients(synthetic_moments(), TopologyInfo(1, (2,)))
        assert coeffs[3] == pytest.approx(-0.5)

    def test_radius_scaling(self, ball_moments):
        base = em_coefficients(ball_moments, TopologyInfo(1, (0,)))
        big = em_coefficients(compute_moments(sphere(3.0), Q16),
                              TopologyInfo(1, (0,)))
        for n in range(6):
            assert big[n] == pytest.approx(base[n] * 3.0 ** (3 - n),
                                           rel=1e-12, abs=1e-15)
        assert big.scaled(1 / 3.0).values == pytest.approx(base.values)


class TestFormCoefficients:
    def test_ball_p0_a1(self, ball_moments):
        assert form_coefficients(0, ball_moments)[1] == pytest.approx(-0.25, rel=1e-13)

    def test_ball_p3_a1(self, ball_moments):
        assert form_coefficients(3, ball_moments)[1] == pytest.approx(0.25, rel=1e-13)

    @pytest.mark.parametrize("p, want", [
        (0, Fraction(-1, 48)), (1, Fraction(29, 48)),
        (2, Fraction(-11, 48)), (3, Fraction(7, 48)),
    ])
    def test_ball_a3(self, ball_moments, p, want):
        assert form_coefficients(p, ball_moments)[3] == pytest.approx(
            float(want), rel=1e-12)

    def test_em_equals_form_differences(self, ball_moments):
        topo = TopologyInfo(1, (0,))
        em = em_coefficients(ball_moments, topo)
        f = {p: form_coefficients(p, ball_moments) for p in range(4)}
        for n in (0, 1, 2, 4, 5):
            assert em[n] == pytest.approx(f[1][n] - f[0][n], rel=1e-11, abs=1e-14)
            assert em[n] == pytest.approx(f[2][n] - f[3][n], rel=1e-11, abs=1e-14)
        assert em[3] == pytest.approx(f[1][3] - f[0][3] - (1 - 1), rel=1e-11)
        assert em[3] == pytest.approx(f[2][3] - f[3][3] - (0 - 1), rel=1e-11)

    def test_em_equals_form_differences_on_torus(self, torus_moments):
        topo = TopologyInfo(1, (1,))
        em = em_coefficients(torus_moments, topo)
        f = {p: form_coefficients(p, torus_moments) for p in range(4)}
        tol = dict(rel=1e-9, abs=1e-11)
        for n in (0, 1, 2, 4, 5):
            assert em[n] == pytest.approx(f[1][n] - f[0][n], **tol)
        assert em[3] == pytest.approx(f[1][3] - f[0][3] - (1 - 1), **tol)
        assert em[3] == pytest.approx(f[2][3] - f[3][3] - (1 - 1), **tol)


class TestGaussBonnet:
    def test_sphere(self, ball_moments):
        r = gauss_bonnet_residual(ball_moments, TopologyInfo(1, (0,)))
        assert abs(r.value) < 1e-11

    def test_ellipsoid(self):
        m = compute_moments(ellipsoid(1.0, 1.3, 1.7), QuadratureSpec(order=32))
        r = gauss_bonnet_residual(m, TopologyInfo(1, (0,)))
        assert abs(r.value) < 1e-8

    def test_torus(self, torus_moments):
        r = gauss_bonnet_residual(torus_moments, TopologyInfo(1, (1,)))
        assert abs(r.value) < 1e-11

    def test_mismatched_topology_is_visible(self, ball_moments):
        r = gauss_bonnet_residual(ball_moments, TopologyInfo(1, (1,)))
        assert abs(r.value) == pytest.approx(4 * math.pi, rel=1e-12)


class TestA3Local:
    def test_unit_ball_is_one_eighth(self, ball_moments):
        assert a3_local(ball_moments).value == pytest.approx(1 / 8, rel=1e-13)

    def test_scale_invariance(self):
        m = compute_moments(sphere(7.5), Q16)
        assert a3_local(m).value == pytest.approx(1 / 8, rel=1e-13)

    def test_balanced_integrand_gives_zero(self):
        m = synthetic_moments(trL2=4.0, detL=3.0)
        assert a3_local(m).value == pytest.approx(0.0, abs=1e-18)

    def test_kappa_variant_differs_and_is_flagged_value(self, ball_moments):
        v = a3_local_kappa_variant(ball_moments)
        assert v.value == pytest.approx(math.pi / 32, rel=1e-13)
        assert v.value != pytest.approx(1 / 8, rel=1e-3)


class TestDeltaA3:
    def test_nonlocal_assembly(self):
        d = delta_a3(TopologyInfo(1, (3,)), 0.0)
        assert d.nonlocal_sum == -3
        assert d.nonlocal_parts == (Fraction(-1), Fraction(-3, 2), Fraction(1, 2))

    def test_ball(self, ball_moments):
        d = delta_a3(TopologyInfo(1, (0,)), a3_local(ball_moments).value)
        assert d.value == pytest.approx(0.25, rel=1e-12)

    def test_zero_crossing(self):
        d = delta_a3(TopologyInfo(1, (2,)), 1.0)
        assert d.value == pytest.approx(0.0, abs=1e-15)

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            delta_a3(TopologyInfo(2, (0, 0)), 0.25)
