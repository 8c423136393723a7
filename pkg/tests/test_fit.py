"""Coefficient fitting: exact inversion, weighting, conditioning."""

import numpy as np
import pytest

from cavityheat.asymptotics import (
    FitConfig,
    IllPosedFitError,
    fit_coefficients,
    suggest_window,
)

TRUE = {-1.5: 0.188, -1.0: 0.0, -0.5: -0.752, 0.0: 0.625, 0.5: -0.0287,
        1.0: 0.003125}
# balanced coefficients resolve each basis direction well above the
# float64 information floor of the samples
BALANCED = {-1.5: 1.7, -1.0: -0.8, -0.5: 1.1, 0.0: 0.625, 0.5: -1.3,
            1.0: 0.9}


def exact_samples(config, coeffs=TRUE):
    t = config.t_grid()
    K = sum(c * t ** e for e, c in coeffs.items())
    return t, K, np.full_like(t, 1e-15)


class TestExactRecovery:
    def test_six_coefficient_inverse(self):
        # exact data carries exact bounds, so the truncation-bound
        # weighting (not the next-order contamination model) applies
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40,
                           weight_mode="bounds")
        fit = fit_coefficients(exact_samples(config, BALANCED), config)
        for e, want in BALANCED.items():
            got = fit.value(e)
            assert got == pytest.approx(want, rel=1e-10), e

    def test_physical_scale_coefficients(self):
        # the cavity-like set has a_4, a_5 four orders below a_0; the
        # recovery is then limited by the float64 content of K(t) itself
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40)
        fit = fit_coefficients(exact_samples(config), config)
        for e, want in TRUE.items():
            got = fit.value(e)
            assert got == pytest.approx(want, rel=1e-7, abs=1e-9), e

    def test_residual_is_tiny(self):
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40)
        fit = fit_coefficients(exact_samples(config), config)
        assert fit.chi2_dof < 1e-6

    def test_pinning_subtracts_before_solving(self):
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40,
                           pinned={-1.0: 0.0, 0.5: -0.0287})
        fit = fit_coefficients(exact_samples(config), config)
        assert fit.value(-1.0) == 0.0
        assert fit.stderr(-1.0) == 0.0
        assert fit.value(0.0) == pytest.approx(0.625, rel=1e-10)
        assert -1.0 not in fit.coefficients

    def test_addressing_by_order(self):
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40)
        fit = fit_coefficients(exact_samples(config), config)
        assert fit.a(3) == pytest.approx(0.625, rel=1e-10)
        assert fit.a(0) == pytest.approx(0.188, rel=1e-10)


class TestValidation:
    def test_window_ordering(self):
        with pytest.raises(ValueError):
            FitConfig(t_lo=0.1, t_hi=0.01)

    def test_exponent_whitelist(self):
        with pytest.raises(ValueError, match="half-power"):
            FitConfig(t_lo=0.01, t_hi=0.1, exponents=(-2.0, 1.0))

    def test_grid_size_floor(self):
        with pytest.raises(ValueError, match="grid points"):
            FitConfig(t_lo=0.01, t_hi=0.1, n_points=8)

    def test_all_pinned_rejected(self):
        config = FitConfig(t_lo=0.01, t_hi=0.1, n_points=12,
                           exponents=(0.0,), pinned={0.0: 1.0})
        with pytest.raises(ValueError, match="free"):
            fit_coefficients(exact_samples(config, {0.0: 1.0}), config)

    def test_ill_posed_window(self):
        # a nearly-degenerate sample window makes the scaled powers of t
        # collinear beyond recovery
        config = FitConfig(t_lo=0.01, t_hi=0.0100001, n_points=40)
        with pytest.raises(IllPosedFitError):
            fit_coefficients(exact_samples(config), config)

    def test_condition_number_reported(self):
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40)
        fit = fit_coefficients(exact_samples(config), config)
        assert fit.condition_number > 1.0
        assert np.isfinite(fit.condition_number)


class TestErrorBars:
    def test_stderr_positive_for_free_coefficients(self):
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40)
        fit = fit_coefficients(exact_samples(config), config)
        assert all(s > 0 for _, s in fit.coefficients.values())

    def test_noise_within_quoted_errors(self):
        rng = np.random.default_rng(5)
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=60)
        t, K, _ = exact_samples(config)
        sigma = 1e-6 * np.abs(K)
        K_noisy = K + sigma * rng.standard_normal(len(t))
        fit = fit_coefficients((t, K_noisy, sigma), config)
        for e, want in TRUE.items():
            got, err = fit.coefficients[e]
            assert abs(got - want) < 6 * err, e

    def test_serialisable(self):
        config = FitConfig(t_lo=0.005, t_hi=0.08, n_points=40)
        fit = fit_coefficients(exact_samples(config), config)
        doc = fit.as_dict()
        assert set(doc) >= {"coefficients", "residual_norm",
                            "condition_number", "window"}


def test_suggest_window_ties_to_truncation_model():
    from cavityheat.spectrum import em_modes, heat_trace

    modes = em_modes(30.0)
    t_lo, t_hi = suggest_window(modes, rtol=1e-10)
    assert t_hi == 0.1
    K, bound = heat_trace(modes, 1.01 * t_lo, rtol=1e-9)
    assert bound <= 1e-9 * K
