import math

import numpy as np
import pytest

from su11sim.errors import InvalidParameter, ZeroPhotons
from su11sim.observables.asymptotes import asymptote_coherent_direct
from su11sim.seeding import (
    DetectionKind,
    DetectionSpec,
    SeedKind,
    SeedSpec,
    check_pairing,
    coherent_moments,
    coherent_snl,
    first_mode_indices,
    first_mode_moments,
    homodyne_first_mode,
    plane_wave_moments,
    plane_wave_photons,
    seeded_direct_coherent,
    single_photon_moments,
    single_photon_snl,
)

EIGENVALUES = np.array([0.7, 0.2, 0.1])


def test_single_photon_without_gain():
    assert single_photon_moments(EIGENVALUES, 0.0) == (1.0, 0.0)
    assert single_photon_snl(EIGENVALUES, 0.0) == 1.0


def test_single_photon_adds_to_vacuum_background():
    gain = 1.3
    gammas = gain * np.sqrt(EIGENVALUES)
    s2 = np.sinh(gammas) ** 2

    mean, variance = single_photon_moments(EIGENVALUES, gain, first=1)

    assert np.isclose(mean, s2.sum() + 1.0 + s2[1])
    assert np.isclose(variance, np.sum(s2 * np.cosh(gammas) ** 2) + s2[1] * np.cosh(gammas[1]) ** 2)


def test_first_mode_index_checked():
    with pytest.raises(InvalidParameter):
        single_photon_moments(EIGENVALUES, 1.0, first=3)


def test_coherent_seed_without_gain_is_poissonian():
    mean, variance = coherent_moments(EIGENVALUES, 0.0, 1e6)

    assert mean == 1e6
    assert variance == 1e6
    assert np.isclose(coherent_snl(EIGENVALUES, 0.0, 1e6), 1e-3)


def test_coherent_seed_rejects_negative_intensity():
    with pytest.raises(InvalidParameter):
        coherent_moments(EIGENVALUES, 1.0, -1.0)


@pytest.mark.parametrize("theta", [0.0, 1.0, 2.5])
def test_homodyne_without_gain(theta):
    mean, variance = first_mode_moments(EIGENVALUES, 0.0, 3.0, theta, 2.0)

    assert np.isclose(mean, 12.0 * math.cos(theta))
    assert variance == 4.0


def test_homodyne_quadrature_mean_vanishes_at_right_angle():
    mean, _ = first_mode_moments(EIGENVALUES, 1.0, 3.0, math.pi / 2, 2.0)

    assert mean == 0.0


def test_plane_wave_with_no_centre_weight():
    mean, variance = plane_wave_moments(EIGENVALUES, 2.0, np.zeros(3), 3.0, 0.0, 2.0)

    assert np.isclose(mean, 12.0)
    assert np.isclose(variance, 4.0)
    assert np.isclose(plane_wave_photons(EIGENVALUES, 2.0, np.zeros(3), 3.0), 9.0)


def test_plane_wave_needs_one_weight_per_mode():
    with pytest.raises(InvalidParameter):
        plane_wave_moments(EIGENVALUES, 1.0, np.zeros(2), 1.0, 0.0, 1.0)


def test_homodyne_needs_coherent_seed():
    with pytest.raises(InvalidParameter):
        check_pairing(SeedSpec(SeedKind.VACUUM), DetectionSpec(DetectionKind.HOMODYNE))
    check_pairing(SeedSpec(SeedKind.COHERENT_PLANE_WAVE, 1e6), DetectionSpec(DetectionKind.HOMODYNE))


@pytest.mark.parametrize("theta", [-0.1, 2 * math.pi])
def test_detection_phase_range(theta):
    with pytest.raises(InvalidParameter):
        DetectionSpec(DetectionKind.HOMODYNE, theta_a=theta)


def test_seed_spec_validation():
    assert SeedSpec("coherent_first_mode", 4.0).alpha == 2.0
    with pytest.raises(InvalidParameter):
        SeedSpec(SeedKind.COHERENT_FIRST_MODE, math.inf)


def test_first_mode_indices():
    assert first_mode_indices([EIGENVALUES] * 3, [0.0, 0.1, 0.2], first=[0, 2, 1]) == [0, 2, 1]
    # bare eigenvalue arrays carry no modes to follow
    assert first_mode_indices([EIGENVALUES] * 3, [0.0, 0.1, 0.2]) == [0, 0, 0]


def test_homodyne_series_at_right_angle_is_stationary():
    phis = np.linspace(0.0, 2 * math.pi, 64, endpoint=False)
    gains = 1.3 * np.abs(np.cos(phis / 2))

    series = homodyne_first_mode([EIGENVALUES] * 64, gains, phis, EIGENVALUES, 0.65, alpha=10.0, theta_a=math.pi / 2)

    assert np.all(series.derivative_zero)
    assert np.all(np.isinf(series.normalized))


def test_coherent_snl_with_no_photons():
    with pytest.raises(ZeroPhotons):
        coherent_snl(EIGENVALUES, 0.0, 0.0)


def test_single_mode_coherent_curve_follows_envelope():
    gamma = 1.3
    phis = np.linspace(0.0, 2 * math.pi, 2000, endpoint=False)
    gains = gamma * np.abs(np.cos(phis / 2))
    one = np.array([1.0])

    series = seeded_direct_coherent([one] * phis.size, gains, phis, one, gamma / 2, alpha2=1e10)

    window = (phis > 0.3) & (np.abs(phis - math.pi) > 0.05) & (phis < 2 * math.pi - 0.3)
    envelope = asymptote_coherent_direct(gamma, phis[window])
    assert np.allclose(series.normalized[window], envelope, rtol=1e-3)
