import math
from types import SimpleNamespace

import numpy as np
import pytest

from su11sim.errors import AllInfinite, BoundaryPoint, InvalidParameter, ZeroPhotons
from su11sim.observables.asymptotes import (
    asymptote_coherent_direct,
    asymptote_high_gain,
    asymptote_low_gain,
    high_gain_floor,
)
from su11sim.observables.sensitivity import (
    analytic_dN_dphi,
    assemble_series,
    band_width,
    dN_dphi,
    derivative_sweep,
    find_min_sensitivity,
    is_full_period,
    phase_sensitivity,
    richardson_check,
    snl_vacuum,
    stationary_tolerance,
    supersensitivity_bands,
    visibility,
)
from su11sim.observables.vacuum import (
    mean_photons_vacuum,
    mode_gains,
    photon_rate,
    truncation_bound,
    variance_vacuum,
)
from su11sim.phasematch.mismatch import Variant
from su11sim.schmidt.calibration import calibrate_gain
from su11sim.sweep_engine.context import build_context
from su11sim.sweep_engine.worker import decompose_at

FULL_PERIOD = np.linspace(0.0, 2 * math.pi, 2000, endpoint=False)


@pytest.mark.parametrize("gain", [0.0, 0.3, 1.3, 5.0])
def test_single_mode_moments(gain):
    assert np.isclose(mean_photons_vacuum([1.0], gain), math.sinh(gain) ** 2)
    assert np.isclose(variance_vacuum([1.0], gain), (math.sinh(gain) * math.cosh(gain)) ** 2)


def test_moments_add_over_modes():
    eigenvalues = np.array([0.6, 0.3, 0.1])
    gammas = mode_gains(eigenvalues, 2.0)

    assert np.allclose(gammas, 2.0 * np.sqrt(eigenvalues))
    assert np.isclose(mean_photons_vacuum(eigenvalues, 2.0), np.sum(np.sinh(gammas) ** 2))
    assert np.isclose(variance_vacuum(eigenvalues, 2.0), np.sum((np.sinh(gammas) * np.cosh(gammas)) ** 2))


def test_negative_gain_rejected():
    with pytest.raises(InvalidParameter):
        mode_gains([1.0], -0.1)


def test_truncation_bound_and_photon_rate():
    dec = SimpleNamespace(eigenvalues=np.array([0.8, 0.15]), tail_mass=0.05)

    assert np.isclose(truncation_bound(dec, 2.0), 0.05 * math.sinh(2.0 * math.sqrt(0.15)) ** 2)
    assert truncation_bound(SimpleNamespace(eigenvalues=np.array([1.0]), tail_mass=0.0), 2.0) == 0.0
    assert np.isclose(photon_rate(2.0, math.pi), 1.0)


def test_full_period_detection():
    assert is_full_period(FULL_PERIOD)
    assert not is_full_period(np.linspace(0.0, 2 * math.pi, 2000))
    assert not is_full_period(np.linspace(0.0, math.pi, 100, endpoint=False))


def test_derivative_wraps_on_full_period():
    values = np.sin(FULL_PERIOD)

    assert np.isclose(dN_dphi(values, FULL_PERIOD, 0), 1.0, rtol=1e-5)
    assert np.allclose(derivative_sweep(values, FULL_PERIOD), np.cos(FULL_PERIOD), atol=1e-5)


def test_open_grid_boundary():
    phis = np.linspace(0.0, 1.0, 11)
    values = phis**2

    with pytest.raises(BoundaryPoint):
        dN_dphi(values, phis, 0)
    derivative = derivative_sweep(values, phis)
    assert math.isnan(derivative[0]) and math.isnan(derivative[-1])
    assert np.isclose(derivative[5], 1.0)


def test_richardson_on_smooth_curve():
    check = richardson_check(np.cos(FULL_PERIOD), FULL_PERIOD, 500)

    assert check["relative_change"] < 1e-4
    assert np.isclose(check["extrapolated"], -math.sin(FULL_PERIOD[500]), rtol=1e-8)


def test_stationary_point_gives_infinite_sensitivity():
    assert phase_sensitivity(1.0, 0.0) == (math.inf, True)
    value, flag = phase_sensitivity(4.0, -2.0)
    assert value == 1.0 and not flag
    assert math.isnan(phase_sensitivity(1.0, math.nan)[0])


def test_snl_needs_reference_photons():
    assert np.isclose(snl_vacuum([1.0], 1.0), 1.0 / math.sinh(1.0))
    with pytest.raises(ZeroPhotons):
        snl_vacuum([1.0], 0.0)


@pytest.mark.parametrize("gamma", [0.04, 1.3, 5.0])
def test_single_mode_sweep_matches_closed_form(gamma):
    # one mode with G(phi) = gamma |cos(phi/2)| and a half-gain reference arm
    gains = gamma * np.abs(np.cos(FULL_PERIOD / 2))
    means = [mean_photons_vacuum([1.0], g) for g in gains]
    variances = [variance_vacuum([1.0], g) for g in gains]

    series = assemble_series(FULL_PERIOD, means, variances, snl_vacuum([1.0], gamma / 2), derivative_noise=0.0)

    window = (FULL_PERIOD > 0.3) & (FULL_PERIOD < math.pi - 0.3)
    expected = asymptote_high_gain(gamma, FULL_PERIOD[window])
    assert np.allclose(series.normalized[window], expected, rtol=1e-3)


def test_turning_points_flagged_at_rounding_level():
    means = np.cos(FULL_PERIOD) + 2.0
    series = assemble_series(FULL_PERIOD, means, means, 1.0)

    assert series.derivative_zero[0] and series.derivative_zero[1000]
    assert math.isinf(series.dphi[0])
    assert series.derivative_zero.sum() == 2


def test_stationary_tolerance_scales_with_neighbours():
    phis = np.linspace(0.0, 1.0, 11)
    values = np.full(11, -3.0)

    tolerance = stationary_tolerance(values, phis, noise=1e-6)

    assert math.isnan(tolerance[0]) and math.isnan(tolerance[-1])
    assert np.allclose(tolerance[1:-1], 1e-6 * 6.0 / 0.2)
    assert np.allclose(stationary_tolerance(np.ones(FULL_PERIOD.size), FULL_PERIOD, 1e-6), 1e-6 / (FULL_PERIOD[1] - FULL_PERIOD[0]))


def test_high_gain_minimum_survives_next_to_dark_fringe():
    # at gamma = 10 the slope near pi is ten orders below the peak slope yet resolved;
    # the grid straddles pi so no node sits on the dark fringe
    gamma = 10.0
    phis = FULL_PERIOD + 0.5 * (FULL_PERIOD[1] - FULL_PERIOD[0])
    gains = gamma * np.abs(np.cos(phis / 2))
    means = [mean_photons_vacuum([1.0], g) for g in gains]
    variances = [variance_vacuum([1.0], g) for g in gains]

    series = assemble_series(phis, means, variances, snl_vacuum([1.0], gamma / 2))
    phi_star, minimum = series.minimum()

    assert not series.derivative_zero.any()
    assert np.all(np.isfinite(series.normalized))
    assert abs(phi_star - math.pi) < 0.01
    assert np.isclose(minimum, high_gain_floor(gamma), rtol=1e-3)


def test_minimum_is_refined_between_nodes():
    phis = np.linspace(0.0, 3.0, 31)
    values = (phis - 1.234) ** 2 + 0.5

    phi_star, minimum = find_min_sensitivity(phis, values)

    assert abs(phi_star - 1.234) < 1e-4
    assert np.isclose(minimum, 0.5, atol=1e-8)


def test_minimum_skips_infinite_points():
    phis = np.linspace(0.0, 1.0, 5)

    assert find_min_sensitivity(phis, [math.inf, 3.0, 2.0, math.inf, 1.0]) == (1.0, 1.0)
    with pytest.raises(AllInfinite):
        find_min_sensitivity(phis, [math.inf] * 5)


def test_bands_have_interpolated_edges():
    phis = np.linspace(0.0, 2.0, 21)
    values = 2.0 * np.abs(phis - 1.0) + 0.5

    bands = supersensitivity_bands(phis, values)

    assert len(bands) == 1
    assert np.allclose(bands[0], (0.75, 1.25))
    assert np.isclose(band_width(bands), 0.5)


def test_band_edge_pinned_next_to_infinity():
    phis = np.linspace(0.0, 1.0, 5)

    bands = supersensitivity_bands(phis, [2.0, 0.5, 0.5, math.inf, 2.0])

    assert len(bands) == 1
    assert np.allclose(bands[0], (1.0 / 6.0, 0.5))


def test_visibility():
    assert np.isclose(visibility([1.0, 3.0, math.inf]), 0.5)
    assert visibility([]) == 0.0


def test_asymptotes():
    assert np.isclose(asymptote_low_gain(math.pi), 0.5)
    assert np.isclose(asymptote_high_gain(1e-6, 2.0), asymptote_low_gain(2.0), rtol=1e-9)
    assert np.isclose(high_gain_floor(10.0), math.sinh(5.0) / 10.0)
    assert np.isclose(asymptote_high_gain(10.0, math.pi), high_gain_floor(10.0))
    assert asymptote_coherent_direct(1.3, math.pi) > 1e10
    with pytest.raises(InvalidParameter):
        asymptote_low_gain(0.0)
    with pytest.raises(InvalidParameter):
        high_gain_floor(-1.0)


@pytest.mark.parametrize("gamma", [0.04, 1.5])
def test_tracked_mode_derivative_matches_difference(toy_config, gamma):
    context = build_context(toy_config)
    calibration = calibrate_gain(decompose_at(context, 0.0, Variant.COMPENSATED), gamma)
    step = 1e-4
    decs = [decompose_at(context, phi, Variant.COMPENSATED) for phi in (1.0 - step, 1.0, 1.0 + step)]
    gains = tuple(calibration.gain(d) for d in decs)
    means = [mean_photons_vacuum(d, g) for d, g in zip(decs, gains)]

    analytic = analytic_dN_dphi(*decs, gains, step)

    assert analytic < 0
    assert math.isclose(analytic, (means[2] - means[0]) / (2 * step), rel_tol=1e-6)
