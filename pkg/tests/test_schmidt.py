import json
import math

import numpy as np
import pytest

from su11sim.errors import DegenerateJSA, InvalidParameter, ModeTrackingLost
from su11sim.jsa.builder import jsa_from_samples
from su11sim.jsa.grid import build_grid
from su11sim.schmidt.calibration import calibrate_gain, schmidt_number
from su11sim.schmidt.decomposition import BinModes, DenseModes, schmidt_decompose
from su11sim.schmidt.export import export_schmidt
from su11sim.schmidt.tracking import ARGMAX, match_modes, track_first_mode
from su11sim.validation.oracles import double_gaussian_jsa, mehler_eigenvalues, mehler_ratio

TAU, SIGMA = 1.0, 0.5


@pytest.fixture(scope="module")
def grid():
    return build_grid(50.0, 10.0, 161)


@pytest.fixture(scope="module")
def jsa(grid):
    return double_gaussian_jsa(grid, TAU, SIGMA)


@pytest.fixture(scope="module")
def full(jsa):
    return schmidt_decompose(jsa, k_max=None)


def test_double_gaussian_spectrum_is_geometric(full):
    exact = mehler_eigenvalues(TAU, SIGMA, 4)

    assert np.isclose(mehler_ratio(TAU, SIGMA), 1.0 / 9.0)
    assert np.allclose(full.eigenvalues[:4], exact, rtol=1e-4)


def test_eigenvalues_descend_and_sum_to_one(full):
    assert np.all(np.diff(full.eigenvalues) <= 0)
    assert np.isclose(full.eigenvalues.sum(), 1.0, rtol=1e-12)
    assert full.tail_mass == 0.0


def test_truncation_keeps_completeness(jsa):
    dec = schmidt_decompose(jsa, k_max=5)

    assert dec.retained == 5
    assert np.isclose(dec.eigenvalues.sum() + dec.tail_mass, 1.0, rtol=1e-12)
    assert dec.tail_mass > 0


def test_modes_orthonormal_under_quadrature(full, tol):
    modes = full.signal_modes[:10]
    gram = (np.conj(modes) * full.grid.w_s) @ modes.T

    assert np.allclose(gram, np.eye(10), atol=tol)


def test_gauge_makes_signal_peak_real_positive(full):
    # even modes only: odd ones have two opposite-sign peaks of equal height
    modes = full.signal_modes[[0, 2, 4]]
    peaks = modes[np.arange(3), np.argmax(np.abs(modes), axis=1)]

    assert np.allclose(peaks.imag, 0.0, atol=1e-14)
    assert np.all(peaks.real > 0)


def test_full_rank_reconstruction(full, jsa):
    assert np.allclose(full.reconstruct(), jsa.amplitude, atol=1e-10 * np.abs(jsa.amplitude).max())
    assert full.reconstruction_error < 1e-12


def test_k_max_must_be_positive(jsa):
    with pytest.raises(InvalidParameter):
        schmidt_decompose(jsa, k_max=0)


def test_antidiagonal_amplitude_has_one_mode_per_bin():
    grid = build_grid(1.0e3, 100.0, 33)
    profile = np.exp(-((grid.signal - grid.center) / 40.0) ** 2)
    matrix = np.zeros((33, 33))
    matrix[np.arange(33), np.arange(33)[::-1]] = profile
    dense = schmidt_decompose(jsa_from_samples(matrix, grid), k_max=None)

    # a purely antidiagonal amplitude has one Schmidt mode per bin
    assert np.isclose(dense.eigenvalues.sum(), 1.0)
    weights = profile**2 * grid.w_s * grid.w_i
    assert np.allclose(dense.eigenvalues, np.sort(weights / weights.sum())[::-1], rtol=1e-9)


def test_calibration_fixes_leading_mode_gain(full):
    calibration = calibrate_gain(full, 1.3)

    assert np.isclose(calibration.gain(full) * math.sqrt(full.eigenvalues[0]), 1.3)
    assert np.isclose(calibration.gain_at(0.5 * full.raw_norm), 0.5 * calibration.gain(full))


def test_calibration_rejects_bad_inputs(full):
    with pytest.raises(InvalidParameter):
        calibrate_gain(full, 0.0)

    class Vanishing:
        raw_norm = 0.0
        eigenvalues = np.ones(1)

    with pytest.raises(DegenerateJSA):
        calibrate_gain(Vanishing(), 1.0)


def test_schmidt_number_limits(full):
    mu = mehler_ratio(TAU, SIGMA)

    assert np.isclose(schmidt_number(full, 0.0), (1 + mu) / (1 - mu), rtol=1e-4)
    assert np.isclose(schmidt_number([0.5, 0.3, 0.2], 1e3), 1.0, rtol=1e-9)
    assert schmidt_number([], 1.0) == 1.0
    # gain concentrates photons in the leading mode
    assert schmidt_number(full, 5.0) < schmidt_number(full, 0.0)


def _dense(rows):
    rows = np.asarray(rows, dtype=complex)
    weights = np.ones(rows.shape[1])
    return DenseModes(rows, rows, weights, weights)


def test_first_mode_tracking_follows_overlap():
    e = np.eye(4)
    bases = [_dense([e[0], e[1]]), _dense([e[1], e[0]]), None, _dense([e[0], e[2]])]

    indices = track_first_mode(bases, [0.0, 0.1, 0.2, 0.3])

    assert indices == [0, 1, 0, 0]
    assert track_first_mode(bases, [0.0, 0.1, 0.2, 0.3], method=ARGMAX) == [0, 0, 0, 0]


def test_first_mode_tracking_lost():
    e = np.eye(4)
    bases = [_dense([e[0], e[1]]), _dense([e[2], e[3]])]

    with pytest.raises(ModeTrackingLost):
        track_first_mode(bases, [0.0, 0.1])


def test_match_modes_returns_permutation():
    e = np.eye(3)

    order = match_modes(_dense([e[0], e[1], e[2]]), _dense([e[2], e[0], e[1]]))

    assert list(order) == [1, 2, 0]


def test_bin_modes_are_point_masses():
    weights = np.full(5, 0.5)
    modes = BinModes(
        signal_bins=np.array([2, 0]),
        idler_bins=np.array([2, 4]),
        idler_phase=np.array([1.0, 1j]),
        w_s=weights,
        w_i=weights,
    )

    signal = modes.signal_matrix()
    assert np.allclose((np.abs(signal) ** 2) @ weights, 1.0)
    assert np.allclose(modes.point_density(2), [1.0, 0.0])
    assert np.allclose(modes.band_mass(weights), 1.0)


def test_export_schmidt(tmp_path, full):
    dec = full.with_gain(2.0)

    paths = export_schmidt(dec, str(tmp_path), "mehler", gamma=1.3, n_modes=3, config_hash="feed")

    with open(paths["summary"]) as f:
        summary = json.load(f)
    assert summary["retained"] == dec.retained
    assert summary["gain"] == 2.0
    assert summary["config_hash"] == "feed"
    modes = open(paths["modes"]).readline().strip().split(",")
    assert modes[:4] == ["omega_s", "omega_i", "u1_re", "u1_im"]
    assert "u3_re" in modes and "u4_re" not in modes
