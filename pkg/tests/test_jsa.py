import json
import math
from dataclasses import replace

import numpy as np
import pytest

from su11sim.dispersion.model import poling_period
from su11sim.errors import InvalidParameter, OutOfWindow, TooCoarse
from su11sim.jsa.builder import build_jsa, jsa_from_samples, sinc
from su11sim.jsa.export import export_jsa
from su11sim.jsa.grid import build_grid, uniform_axis
from su11sim.phasematch.mismatch import DeviceGeometry, ModulatorSpec, PumpSpec, Regime, Variant


@pytest.fixture
def center(pump_omega):
    return 0.5 * pump_omega


@pytest.fixture
def geometry(toy_model):
    def factory(variant=Variant.COMPENSATED, gap=1e-3):
        return DeviceGeometry(length=8e-3, gap=gap, poling_period=poling_period(toy_model, 766e-9), variant=variant)

    return factory


@pytest.fixture
def pulsed(pump_omega):
    return PumpSpec(pump_omega, Regime.PULSED, tau=3.5e-13)


@pytest.fixture
def cw(pump_omega):
    return PumpSpec(pump_omega, Regime.CW)


def test_sinc_removable_singularity():
    x = np.array([0.0, 1e-9, 0.5, math.pi])

    assert np.allclose(sinc(x), [1.0, 1.0, math.sin(0.5) / 0.5, 0.0], atol=1e-15)


def test_uniform_axis_centre_node_is_exact(center):
    axis, weights = uniform_axis(center, 4.5e12, 129)

    assert axis[64] == center
    assert np.isclose(weights.sum(), 9e12)
    assert weights[0] == 0.5 * weights[1]


def test_grid_rejects_too_few_points(center):
    with pytest.raises(TooCoarse):
        build_grid(center, 4.5e12, 15)


def test_grid_outside_dispersion_window(toy_model, center):
    with pytest.raises(OutOfWindow):
        build_grid(center, 4e14, 33, model=toy_model)


def test_refined_grid_keeps_old_nodes(center):
    grid = build_grid(center, 4.5e12, 33)
    fine = grid.refined()

    assert fine.n_s == 65
    assert np.isclose(fine.spacing, 0.5 * grid.spacing)
    assert np.allclose(fine.signal[::2], grid.signal, rtol=1e-15, atol=0)
    assert fine.digest() != grid.digest()


@pytest.mark.parametrize("variant", [Variant.COMPENSATED, Variant.NON_COMPENSATED, Variant.SINGLE_SECTION])
def test_pulsed_jsa_is_normalized(toy_model, geometry, pulsed, center, variant):
    grid = build_grid(center, 4.5e12, 65, model=toy_model)

    jsa = build_jsa(toy_model, geometry(variant), pulsed, ModulatorSpec(phi=1.0), grid)

    assert jsa.amplitude.shape == (65, 65)
    assert jsa.raw_norm > 0
    assert np.isclose(jsa.norm(), 1.0, rtol=1e-12)
    assert not jsa.amplitude.flags.writeable


def test_single_section_ignores_modulator(toy_model, geometry, pulsed, center):
    grid = build_grid(center, 4.5e12, 33, model=toy_model)
    geom = geometry(Variant.SINGLE_SECTION)

    a = build_jsa(toy_model, geom, pulsed, ModulatorSpec(phi=0.0), grid)
    b = build_jsa(toy_model, geom, pulsed, ModulatorSpec(phi=2.0), grid)

    assert np.array_equal(a.amplitude, b.amplitude)


def test_cw_jsa_is_antidiagonal(toy_model, geometry, cw, center):
    grid = build_grid(center, 4.5e12, 65, model=toy_model)

    jsa = build_jsa(toy_model, geometry(), cw, ModulatorSpec(phi=0.5), grid)
    dense = jsa.amplitude

    assert jsa.is_antidiagonal
    assert np.isclose(jsa.norm(), 1.0, rtol=1e-12)
    off = dense.copy()
    off[np.arange(65), np.arange(65)[::-1]] = 0.0
    assert np.all(off == 0.0)
    # the materialized matrix carries the same quadrature norm
    assert np.isclose(np.linalg.norm(jsa.weighted_matrix()), 1.0, rtol=1e-12)


@pytest.mark.parametrize("phi", [0.4, 1.3, 2.2, 3.0])
def test_compensated_cw_raw_norm_follows_cosine(toy_model, geometry, cw, center, phi):
    # in a dispersionless crystal the two sections cancel exactly, so
    # F(phi) = F(0) (1 + e^{i phi}) / 2 at every frequency
    grid = build_grid(center, 4.5e12, 129, model=toy_model)
    geom = geometry()

    zero = build_jsa(toy_model, geom, cw, ModulatorSpec(phi=0.0), grid)
    shifted = build_jsa(toy_model, geom, cw, ModulatorSpec(phi=phi), grid)

    assert np.isclose(shifted.raw_norm / zero.raw_norm, abs(math.cos(phi / 2)), rtol=1e-9)
    assert np.allclose(np.abs(shifted.profile), np.abs(zero.profile), atol=1e-9)


def test_noncompensated_cw_keeps_residual_amplitude(toy_model, geometry, cw, center):
    grid = build_grid(center, 4.5e12, 129, model=toy_model)
    geom = geometry(Variant.NON_COMPENSATED, gap=10e-3)

    zero = build_jsa(toy_model, geom, cw, ModulatorSpec(phi=0.0), grid)
    at_pi = build_jsa(toy_model, geom, cw, ModulatorSpec(phi=math.pi), grid)

    assert at_pi.raw_norm / zero.raw_norm > 0.1


def test_gap_region_adds_unpoled_term(toy_model, geometry, cw, center):
    grid = build_grid(center, 4.5e12, 129, model=toy_model)
    plain = geometry(Variant.NON_COMPENSATED, gap=10e-3)
    with_gap = replace(plain, include_gap_region=True)
    mod = ModulatorSpec(phi=0.7)

    a = build_jsa(toy_model, plain, cw, mod, grid)
    b = build_jsa(toy_model, with_gap, cw, mod, grid)
    added = b.profile[64] * b.raw_norm - a.profile[64] * a.raw_norm

    # at degeneracy the poled mismatch vanishes and the gap sees only the grating wavevector
    period = plain.poling_period
    expected = period * abs(math.sin(math.pi * plain.gap / period)) / (4.0 * plain.length)
    assert np.isclose(abs(added), expected, rtol=1e-6)


@pytest.mark.parametrize("variant, gap", [(Variant.COMPENSATED, 10e-3), (Variant.NON_COMPENSATED, 0.0)])
def test_gap_region_needs_noncompensated_gap(toy_model, geometry, cw, center, variant, gap):
    grid = build_grid(center, 4.5e12, 65, model=toy_model)
    plain = geometry(variant, gap=gap)
    mod = ModulatorSpec(phi=0.7)

    a = build_jsa(toy_model, plain, cw, mod, grid)
    b = build_jsa(toy_model, replace(plain, include_gap_region=True), cw, mod, grid)

    assert np.array_equal(a.profile, b.profile)


def test_compensated_jsa_at_zero_phase_matches_single_section(toy_model, geometry, cw, center):
    grid = build_grid(center, 4.5e12, 129, model=toy_model)

    compensated = np.abs(build_jsa(toy_model, geometry(), cw, ModulatorSpec(phi=0.0), grid).profile)
    single = np.abs(build_jsa(toy_model, geometry(Variant.SINGLE_SECTION), cw, ModulatorSpec(), grid).profile)

    # central lobe: out to the first minimum of the single-section sinc on each side
    right = 64 + int(np.argmax(np.diff(single[64:]) > 0))
    left = 64 - int(np.argmax(np.diff(single[64::-1]) > 0))
    lobe = slice(left, right + 1)
    assert right - left > 10
    assert np.corrcoef(compensated[lobe], single[lobe])[0, 1] > 0.99


def test_cw_needs_square_grid(toy_model, geometry, cw, center):
    grid = build_grid(center, 4.5e12, 33, n_i=35, model=toy_model)

    with pytest.raises(InvalidParameter):
        build_jsa(toy_model, geometry(), cw, ModulatorSpec(), grid)


def test_samples_must_match_grid(center):
    grid = build_grid(center, 1e12, 17)

    with pytest.raises(InvalidParameter):
        jsa_from_samples(np.ones((16, 17)), grid)


def test_export_jsa(tmp_path, toy_model, geometry, pulsed, center):
    grid = build_grid(center, 4.5e12, 33, model=toy_model)
    jsa = build_jsa(toy_model, geometry(), pulsed, ModulatorSpec(phi=1.0), grid)

    paths = export_jsa(jsa, str(tmp_path), "toy", config_hash="abc123")

    data = np.load(paths["matrix"])
    assert np.allclose(data["re"] + 1j * data["im"], jsa.amplitude)
    sidecar = json.loads(open(paths["sidecar"]).read())
    assert sidecar["variant"] == "compensated"
    assert sidecar["config_hash"] == "abc123"
    assert sidecar["grid"]["n_s"] == 33
    assert "<svg" in open(paths["svg"]).read()
