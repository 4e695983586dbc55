import json
import math

import numpy as np
import pandas as pd
import pytest

from su11sim.errors import ConvergenceGateFailed
from su11sim.sweep_engine.context import build_context
from su11sim.sweep_engine.convergence import ConvergenceReport, GateEntry, apply_gate, convergence_gate
from su11sim.sweep_engine.engine import phase_grid, run_gain_sweep, run_phase_sweep
from su11sim.sweep_engine.results import (
    FILTERED_COLUMNS,
    GAIN_COLUMNS,
    GAIN_FILTERED_COLUMNS,
    PHASE_COLUMNS,
    write_outputs,
)
from su11sim.sweep_engine.worker import compute_point

PULSED = {"regime": "pulsed", "duration_s": 3.5e-13}


@pytest.fixture
def low_gain(toy_config):
    return run_phase_sweep(toy_config, workers=1)


def test_phase_grid_excludes_endpoint(toy_config):
    phis = phase_grid(toy_config.phi)

    assert phis.size == 401
    assert phis[0] == 0.0
    assert phis[-1] < 2 * math.pi


def test_low_gain_minimum_is_half(low_gain):
    summary = low_gain.summary.gammas[0]

    assert abs(summary.min_normalized - 0.5) < 0.025
    assert abs(summary.phi_star - math.pi) < 0.05
    assert summary.photon_rate_phi0 > 0


def test_low_gain_curve_follows_asymptote(low_gain):
    frame = low_gain.frame
    window = (frame["phi"] >= math.pi / 2) & (frame["phi"] <= math.pi - 0.1)
    phis = frame.loc[window, "phi"].to_numpy()

    assert window.sum() > 50
    assert np.allclose(frame.loc[window, "normalized"], 1.0 / (2.0 * np.sin(phis / 2.0)), rtol=1e-2)


def test_turning_points_are_flagged(low_gain):
    frame = low_gain.frame

    assert frame["derivative_zero"].iloc[0]
    assert math.isinf(frame["normalized"].iloc[0])


def test_high_gain_minimum_next_to_dark_fringe(make_config):
    result = run_phase_sweep(make_config(gammas=[10.0]), workers=1)
    frame = result.frame

    assert abs(result.summary.gammas[0].phi_star - math.pi) < 0.1
    assert np.isfinite(frame["normalized"].iloc[[200, 201]]).all()
    assert not frame["derivative_zero"].iloc[190:212].any()


def test_phase_frame_columns(low_gain):
    assert list(low_gain.frame.columns) == PHASE_COLUMNS
    assert low_gain.summary.kind == "phase"
    assert low_gain.summary.variant == "compensated"
    assert low_gain.summary.regime == "cw"


def test_results_do_not_depend_on_worker_count(toy_config):
    serial = run_phase_sweep(toy_config, workers=1)
    compute_point.cache_clear()
    threaded = run_phase_sweep(toy_config, workers=2)

    assert serial.frame.equals(threaded.frame)


def test_gain_sweep_sorts_gammas(toy_config):
    result = run_gain_sweep(toy_config, gammas=[0.5, 0.04, 0.2])

    assert list(result.frame.columns) == GAIN_COLUMNS
    assert list(result.frame["gamma"]) == [0.04, 0.2, 0.5]
    assert [s.gamma for s in result.summary.gammas] == [0.04, 0.2, 0.5]


def test_full_band_filter_matches_unfiltered(toy_config):
    result = run_phase_sweep(toy_config, filter_option="4.5e12")
    frame = result.frame

    assert list(frame.columns) == PHASE_COLUMNS + FILTERED_COLUMNS
    assert np.allclose(frame["N_filt"], frame["N"], rtol=1e-9)
    assert np.allclose(frame["norm_filt"], frame["normalized"], rtol=1e-9)
    assert result.summary.filter_half_width == 4.5e12


def test_filtered_gain_sweep_columns(make_config):
    config = make_config(filter={"half_width_rad_s": 2.855e12})

    result = run_gain_sweep(config)

    assert list(result.frame.columns) == GAIN_COLUMNS + GAIN_FILTERED_COLUMNS


def test_filter_hash_separates_cached_points(toy_config):
    plain = build_context(toy_config)
    filtered = build_context(toy_config, filter_option="central-lobe")

    assert plain.filter_spec is None
    assert filtered.band_weights is not None
    assert plain.physics_hash != filtered.physics_hash


def test_filter_ignored_for_seeded_runs(make_config):
    config = make_config(seed={"kind": "coherent_plane_wave"}, detection={"kind": "homodyne"})

    context = build_context(config, filter_option="central-lobe")

    assert context.filter_spec is None
    assert context.band_weights is None


def test_plane_wave_homodyne_sweep(make_config):
    config = make_config(seed={"kind": "coherent_plane_wave", "alpha2": 1e4}, detection={"kind": "homodyne"})

    result = run_phase_sweep(config)

    assert result.summary.seed == "coherent_plane_wave"
    assert result.summary.detection == "homodyne"
    assert len(result.frame) == 401


@pytest.mark.parametrize("kind", ["single_photon_first_mode", "coherent_first_mode"])
def test_direct_seeded_sweep_peaks_at_zero_phase(make_config, kind):
    config = make_config(seed={"kind": kind, "alpha2": 100.0})

    result = run_phase_sweep(config)
    frame = result.frame

    assert result.summary.seed == kind
    assert result.summary.detection == "direct"
    assert frame["N"].iloc[0] > frame["N"].iloc[200]
    assert frame["N"].iloc[200] >= 1.0 - 1e-9


def test_first_mode_homodyne_sweep(make_config):
    config = make_config(seed={"kind": "coherent_first_mode", "alpha2": 1e4}, detection={"kind": "homodyne"})

    result = run_phase_sweep(config)

    assert result.summary.detection == "homodyne"
    assert list(result.frame.columns) == PHASE_COLUMNS


def test_write_outputs(tmp_path, toy_config):
    result = run_phase_sweep(toy_config)

    paths = write_outputs(result, str(tmp_path))

    assert paths["csv"].endswith(f"{result.config_hash}_phase.csv")
    frame = pd.read_csv(paths["csv"])
    assert list(frame.columns) == PHASE_COLUMNS
    summary = json.loads(open(paths["json"]).read())
    assert summary["config_hash"] == result.config_hash
    assert "<svg" in open(paths["svg"]).read()


def test_convergence_gate_passes_on_smooth_spectrum(make_config):
    config = make_config(pump=PULSED, convergence={"mode": "flag", "threshold": 0.05})

    report = convergence_gate(config, points=129)

    assert report.passed
    assert report.points_fine == 257
    assert {e.quantity for e in report.entries} == {"raw_ratio", "normalized", "mean_photons_phi0"}


def test_convergence_gate_fails_on_under_resolved_gap(make_config):
    # a long gap winds the phase along the sum frequency faster than 16 points resolve
    config = make_config(pump=PULSED, device={"gap_m": 0.05}, convergence={"mode": "flag"})

    report = convergence_gate(config, points=16)

    assert not report.passed
    assert report.max_drift >= report.threshold


def _failed_report():
    return ConvergenceReport(
        passed=False,
        threshold=5e-3,
        max_drift=0.1,
        gamma=1.3,
        points_coarse=16,
        points_fine=31,
        entries=[GateEntry(quantity="normalized", phi=1.0, coarse=0.9, fine=1.0, drift=0.1)],
    )


def test_strict_gate_raises():
    with pytest.raises(ConvergenceGateFailed) as info:
        apply_gate(_failed_report(), "strict")

    assert info.value.details["max_drift"] == 0.1


@pytest.mark.parametrize("mode", ["flag", "off"])
def test_lenient_gate_modes(mode):
    assert apply_gate(_failed_report(), mode) is None


def test_cw_is_the_long_pulse_limit(make_config):
    cw = make_config(phi={"count": 65})
    pulsed = make_config(phi={"count": 65}, pump={"regime": "pulsed", "duration_s": 1e-11}, schmidt={"k_max": 129})

    narrow = run_phase_sweep(cw, workers=1).curves[0.04][0]
    long_pulse = run_phase_sweep(pulsed, workers=1).curves[0.04][0]

    assert np.max(np.abs(narrow.N / narrow.N[0] - long_pulse.N / long_pulse.N[0])) < 0.01
    assert abs(long_pulse.minimum()[1] / narrow.minimum()[1] - 1.0) < 0.1


@pytest.mark.parametrize(
    "seed, detection",
    [("coherent_first_mode", "direct"), ("coherent_first_mode", "homodyne"), ("coherent_plane_wave", "homodyne")],
)
def test_seeded_minima_stay_at_shot_noise(make_config, seed, detection):
    config = make_config(gammas=[1.3, 2.5], seed={"kind": seed, "alpha2": 1e6}, detection={"kind": detection})

    minima = run_gain_sweep(config, workers=1).frame["min_normalized"].to_numpy()

    assert np.all(minima >= 1.0 - 1e-6)


def test_single_photon_seed_hurts_at_low_gain(make_config):
    gammas = [0.1, 0.3]
    vacuum = run_gain_sweep(make_config(gammas=gammas), workers=1).frame
    seeded = run_gain_sweep(make_config(gammas=gammas, seed={"kind": "single_photon_first_mode"}), workers=1).frame

    assert np.all(seeded["min_normalized"].to_numpy() > vacuum["min_normalized"].to_numpy())
