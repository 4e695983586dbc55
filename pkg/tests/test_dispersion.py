import json

import numpy as np
import pytest

from su11sim.dispersion.loader import load_dispersion_file, parse_dispersion_entries
from su11sim.dispersion.model import (
    C_LIGHT,
    Polarization,
    constant_index_model,
    default_ktp,
    degenerate_mismatch,
    group_velocity,
    poling_period,
    refractive_index,
    wavelength_to_omega,
    wavevector,
)
from su11sim.errors import ConfigError, NoSolution, OutOfWindow, StencilOutOfWindow
from su11sim.phasematch.mismatch import delta_beta


@pytest.mark.parametrize(
    "pol, low, high",
    [(Polarization.ORDINARY, 1.70, 1.76), (Polarization.EXTRAORDINARY, 1.79, 1.84)],
)
def test_ktp_index_at_telecom_wavelength(pol, low, high):
    n = refractive_index(default_ktp(), pol, wavelength_to_omega(1550e-9))

    assert isinstance(n, float)
    assert low < n < high


def test_vector_input_gives_vector_output():
    omegas = wavelength_to_omega(np.array([1400e-9, 1550e-9, 1600e-9]))

    n = refractive_index(default_ktp(), Polarization.ORDINARY, omegas)

    assert n.shape == (3,)
    # normal dispersion: index falls with wavelength
    assert np.all(np.diff(n) < 0)


def test_wavevector_is_index_times_omega_over_c():
    model = default_ktp()
    omega = wavelength_to_omega(1532e-9)

    k = wavevector(model, Polarization.EXTRAORDINARY, omega)

    assert np.isclose(k, refractive_index(model, Polarization.EXTRAORDINARY, omega) * omega / C_LIGHT, rtol=1e-15)


def test_query_outside_window_raises():
    with pytest.raises(OutOfWindow):
        refractive_index(default_ktp(), Polarization.ORDINARY, wavelength_to_omega(3.0e-6))


def test_group_velocity_of_dispersionless_crystal(toy_model, pump_omega):
    v = group_velocity(toy_model, Polarization.ORDINARY, 0.5 * pump_omega)

    assert np.isclose(v, C_LIGHT / 1.8, rtol=1e-8)


@pytest.mark.parametrize("pol", [Polarization.ORDINARY, Polarization.EXTRAORDINARY])
def test_group_velocity_converges_when_step_halves(pol):
    omega = wavelength_to_omega(1532e-9)

    coarse = group_velocity(default_ktp(), pol, omega, rel_step=1e-6)
    fine = group_velocity(default_ktp(), pol, omega, rel_step=5e-7)

    assert abs(fine / coarse - 1.0) < 1e-8


def test_group_velocity_stencil_at_window_edge(toy_model):
    edge = toy_model.window(Polarization.ORDINARY)[1]

    with pytest.raises(StencilOutOfWindow):
        group_velocity(toy_model, Polarization.ORDINARY, edge)


def test_poling_period_cancels_degenerate_mismatch():
    model = default_ktp()
    period = poling_period(model, 766e-9)
    omega_p = wavelength_to_omega(766e-9)

    residual = delta_beta(model, period, 0.5 * omega_p, 0.5 * omega_p)
    scale = wavevector(model, Polarization.ORDINARY, omega_p)

    assert 1e-6 < period < 1e-3
    assert abs(residual) <= 1e-10 * scale


def test_poling_period_of_toy_crystal(toy_model):
    # bare mismatch is -0.05 * omega_p / c, so Lambda = lambda_p / 0.05
    period = poling_period(toy_model, 766e-9)

    assert np.isclose(period, 766e-9 / 0.05, rtol=1e-9)


def test_no_positive_poling_period():
    model = constant_index_model(1.8, 1.7, (1.0e15, 2.6e15))

    assert degenerate_mismatch(model, wavelength_to_omega(766e-9)) > 0
    with pytest.raises(NoSolution):
        poling_period(model, 766e-9)


def test_table_entry_overrides_one_polarization():
    model = parse_dispersion_entries(
        {"pol": "e", "type": "table", "points": [[1.0e15, 1.9], [2.6e15, 1.9]]}
    )

    assert np.isclose(refractive_index(model, Polarization.EXTRAORDINARY, 1.2e15), 1.9)
    # ordinary axis keeps the bulk default
    assert model.ordinary == default_ktp().ordinary


@pytest.mark.parametrize(
    "entries",
    [
        {"pol": "o", "type": "sellmeier"},
        {"pol": "x", "type": "table", "points": [[1.0e15, 1.8], [2.0e15, 1.8]]},
        {"pol": "o", "type": "sellmeier", "coeffs": [1.0, 2.0, 3.0, 4.0, 5.0]},
        [
            {"pol": "o", "type": "table", "points": [[1.0e15, 1.8], [2.0e15, 1.8]]},
            {"pol": "o", "type": "table", "points": [[1.0e15, 1.8], [2.0e15, 1.8]]},
        ],
    ],
)
def test_invalid_dispersion_entries(entries):
    with pytest.raises(ConfigError):
        parse_dispersion_entries(entries)


def test_load_dispersion_file(toy_dispersion_file, pump_omega):
    model = load_dispersion_file(toy_dispersion_file)

    assert np.isclose(refractive_index(model, Polarization.ORDINARY, pump_omega), 1.8)
    assert np.isclose(refractive_index(model, Polarization.EXTRAORDINARY, pump_omega), 1.9)


def test_load_missing_or_malformed_file(tmp_path):
    with pytest.raises(ConfigError):
        load_dispersion_file(str(tmp_path / "absent.json"))

    broken = tmp_path / "broken.json"
    broken.write_text("[{\"pol\": \"o\",")
    with pytest.raises(ConfigError):
        load_dispersion_file(str(broken))

    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"pol": "o", "type": "table", "points": [[2.0e15, 1.8], [1.0e15, 1.8]]}))
    with pytest.raises(ConfigError):
        load_dispersion_file(str(wrong))
