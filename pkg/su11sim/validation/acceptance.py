"""Acceptance suite run by ``su11sim validate``.

Each criterion derives the device configuration it needs from the run
config, measures its quantities and reports pass/fail together with the
physics it checks.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from su11sim.config import settings
from su11sim.config.run_config import RunConfig, apply_overrides, config_hash, validate_run_config
from su11sim.dispersion.model import Polarization, wavevector
from su11sim.errors import Su11Error
from su11sim.filtering.filters import CENTRAL_LOBE_HALF_WIDTH, FilterSpec
from su11sim.jsa.grid import build_grid
from su11sim.observables.asymptotes import asymptote_coherent_direct, asymptote_low_gain, high_gain_floor
from su11sim.observables.sensitivity import richardson_check, visibility
from su11sim.observables.vacuum import mean_photons_vacuum, variance_vacuum
from su11sim.phasematch.mismatch import Variant, delta_beta
from su11sim.schmidt.calibration import calibrate_gain
from su11sim.schmidt.decomposition import schmidt_decompose
from su11sim.seeding.direct import single_photon_snl
from su11sim.sweep_engine.context import build_context, build_pump, load_model, resolve_poling_period
from su11sim.sweep_engine.convergence import convergence_gate, phase_step
from su11sim.sweep_engine.engine import phase_grid, run_gain_sweep, run_phase_sweep
from su11sim.sweep_engine.worker import PhaseWorker, compute_point, decompose_at
from su11sim.utils.performance import Stopwatch
from su11sim.validation.oracles import (
    double_gaussian_jsa,
    fock_kernel_moments,
    fock_moments,
    mehler_eigenvalues,
)

logger = logging.getLogger(__name__)

# period quoted for the reference waveguide; the bulk model derives its own
REFERENCE_POLING_PERIOD = 126e-6

ROUND_TRIP_TOLERANCE = 1e-10
NONCOMPENSATED_RAW_FLOOR = 0.1
SEED_FLOOR_TOLERANCE = 1e-6
ORACLE_TOLERANCE = 1e-4

FILTER_GAMMA = 2.5
FILTER_PUMP_DURATION = 3.5e-13
LONG_PULSE_DURATION = 3e-12
CW_RATIO_TOLERANCE = 0.05
CW_MIN_TOLERANCE = 0.05

Outcome = Tuple[bool, Dict[str, Any], Optional[str]]


class CriterionResult(BaseModel):
    key: str
    title: str
    anchor: str
    passed: bool
    measured: Dict[str, Any]
    runtime_s: float
    budget_s: Optional[float] = None
    note: Optional[str] = None


class AcceptanceReport(BaseModel):
    config_hash: str
    passed: bool
    criteria: List[CriterionResult]


@dataclass(frozen=True)
class Criterion:
    key: str
    title: str
    anchor: str
    budget_s: Optional[float]
    check: Callable[[RunConfig, int], Outcome]

    def run(self, config: RunConfig, workers: int) -> CriterionResult:
        with Stopwatch(self.key) as watch:
            try:
                passed, measured, note = self.check(config, workers)
            except Su11Error as e:
                logger.error(f"Criterion {self.key} raised: {e}")
                passed, measured, note = False, {"error": e.code or type(e).__name__}, str(e)
        over_budget = self.budget_s is not None and watch.elapsed > self.budget_s
        if over_budget:
            note = f"{note + '; ' if note else ''}runtime {watch.elapsed:.1f}s exceeds {self.budget_s:.0f}s"
        return CriterionResult(
            key=self.key,
            title=self.title,
            anchor=self.anchor,
            passed=bool(passed and not over_budget),
            measured=measured,
            runtime_s=watch.elapsed,
            budget_s=self.budget_s,
            note=note,
        )


CRITERIA: Dict[str, Criterion] = {}


def criterion(key: str, title: str, anchor: str, budget_s: Optional[float] = None):
    """Register a check returning ``(passed, measured, note)``."""

    def decorator(func: Callable[[RunConfig, int], Outcome]):
        CRITERIA[key] = Criterion(key, title, anchor, budget_s, func)
        return func

    return decorator


def derive(config: RunConfig, *overrides: str) -> RunConfig:
    data = config.model_dump(mode="json")
    apply_overrides(data, overrides)
    return validate_run_config(data)


def device_config(config: RunConfig, *overrides: str) -> RunConfig:
    """Compensated CW device, vacuum seed, no filter, gate left to its own criterion."""
    return derive(
        config,
        "device.variant=compensated",
        "pump.regime=cw",
        "seed.kind=vacuum",
        "detection.kind=direct",
        "filter=null",
        "convergence.mode=off",
        *overrides,
    )


def _gammas(values: Sequence[float]) -> str:
    return "gammas=[" + ",".join(repr(float(g)) for g in values) + "]"


def _first_curve(result):
    return next(iter(result.curves.values()))


def _relative(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


@criterion("poling", "Poling period round trip", "quasi-phase-matching cancels the degenerate mismatch")
def check_poling(config: RunConfig, workers: int) -> Outcome:
    model = load_model(config)
    pump = build_pump(config)
    period = resolve_poling_period(config, model)
    residual = float(delta_beta(model, period, pump.center, pump.center))
    scale = float(wavevector(model, Polarization.ORDINARY, pump.omega_p))
    measured = {
        "poling_period_um": period * 1e6,
        "residual_rad_per_m": residual,
        "reference_period_um": REFERENCE_POLING_PERIOD * 1e6,
        "period_vs_reference": f"{period * 1e6:.1f} um computed, {REFERENCE_POLING_PERIOD * 1e6:.0f} um reference waveguide",
    }
    note = "reference waveguide period is informational: the bulk Sellmeier model ignores waveguide dispersion"
    return abs(residual) <= ROUND_TRIP_TOLERANCE * scale, measured, note


@criterion(
    "low_gain",
    "Low-gain sensitivity floor",
    "weak-gain limit 1/(2 sin(phi/2)), reaching 0.5 at phi = pi",
    budget_s=120.0,
)
def check_low_gain(config: RunConfig, workers: int) -> Outcome:
    cfg = device_config(config, _gammas([0.04]))
    series, _ = _first_curve(run_phase_sweep(cfg, workers=workers))
    phi_star, minimum = series.minimum()
    window = (series.phis >= math.pi / 2) & (series.phis <= math.pi - 0.1) & np.isfinite(series.normalized)
    deviation = float(np.max(np.abs(series.normalized[window] / asymptote_low_gain(series.phis[window]) - 1.0)))
    measured = {"phi_star": phi_star, "min_normalized": minimum, "max_curve_deviation": deviation}
    return abs(minimum - 0.5) <= 0.05 * 0.5 and deviation <= 0.05, measured, None


@criterion(
    "high_gain",
    "High-gain trend",
    "minimum sensitivity follows sinh(gamma/2)/gamma and grows with gain",
    budget_s=600.0,
)
def check_high_gain(config: RunConfig, workers: int) -> Outcome:
    gammas = [1.3, 2.5, 5.0, 10.0]
    frame = run_gain_sweep(device_config(config, _gammas(gammas)), workers=workers).frame
    minima = frame["min_normalized"].to_numpy()
    ratios = minima / np.array([high_gain_floor(g) for g in gammas])
    measured = {"min_normalized": minima.tolist(), "ratio_to_envelope": ratios.tolist()}
    within = bool(np.all((ratios >= 0.5) & (ratios <= 2.0)))
    monotone = bool(np.all(np.diff(minima) > 0))
    return within and monotone, measured, None


@criterion(
    "contrast",
    "Destructive-interference contrast",
    "compensation restores the null at phi = pi; without it the amplitude never vanishes",
)
def check_contrast(config: RunConfig, workers: int) -> Outcome:
    cfg = device_config(config, _gammas([1.3]))
    series, _ = _first_curve(run_phase_sweep(cfg, workers=workers))
    vis = visibility(series.N)
    phi_min = float(series.phis[int(np.argmin(series.N))])
    step = phase_step(cfg)

    nc = derive(cfg, "device.variant=noncompensated")
    context = build_context(nc)
    points = PhaseWorker(context, workers).run(phase_grid(nc.phi), Variant.NON_COMPENSATED)
    zero = compute_point(context, 0.0, Variant.NON_COMPENSATED)
    raw_floor = min(p.raw_norm for p in points) / zero.raw_norm
    measured = {
        "visibility": vis,
        "phi_of_min_N": phi_min,
        "noncompensated_min_raw_ratio": raw_floor,
        "raw_ratio_floor": NONCOMPENSATED_RAW_FLOOR,
    }
    passed = vis > 0.95 and abs(phi_min - math.pi) <= step * (1 + 1e-9) and raw_floor > NONCOMPENSATED_RAW_FLOOR
    return passed, measured, None


@criterion("photon_anchors", "Photon-number anchors", "mean photon number at phi = 0 for weak and strong gain")
def check_photon_anchors(config: RunConfig, workers: int) -> Outcome:
    cfg = device_config(config)
    context = build_context(cfg)
    zero = compute_point(context, 0.0, Variant.COMPENSATED)
    photons = {}
    for gamma in (0.04, 10.0):
        calibration = calibrate_gain(zero, gamma)
        photons[gamma] = mean_photons_vacuum(zero.eigenvalues, calibration.gain_at(zero.raw_norm))
    weak, strong = photons[0.04], photons[10.0]
    measured = {"N0_gamma_0.04": weak, "N0_gamma_10": strong}
    passed = abs(weak - 0.12) <= 0.3 * 0.12 and 1e8 <= strong <= 1e10
    note = "tolerances are loose: absolute photon numbers depend on the waveguide dispersion"
    return passed, measured, note


@criterion(
    "filtering",
    "Filtering improvement",
    "central-lobe band-pass deepens and widens the supersensitive region",
)
def check_filtering(config: RunConfig, workers: int) -> Outcome:
    cw = device_config(config, _gammas([FILTER_GAMMA]))
    center = build_pump(cw).center
    full = run_phase_sweep(
        cw, filter_option=FilterSpec(center=center, half_width=cw.grid.half_width_rad_s), workers=workers
    ).frame
    plain, banded = full["normalized"].to_numpy(), full["norm_filt"].to_numpy()
    finite = np.isfinite(plain) & np.isfinite(banded)
    same_mask = bool(np.array_equal(np.isfinite(plain), np.isfinite(banded)))
    full_band_error = float(np.max(np.abs(banded[finite] / plain[finite] - 1.0))) if finite.any() else math.inf
    cw_central = run_phase_sweep(cw, filter_option="central-lobe", workers=workers).summary.gammas[0]

    # CW bins are their own Schmidt modes, so a band only selects bins;
    # the improvement needs the cross-mode structure of a finite pump
    pulsed = derive(cw, "pump.regime=pulsed", f"pump.duration_s={FILTER_PUMP_DURATION!r}")
    central = run_phase_sweep(pulsed, filter_option="central-lobe", workers=workers).summary.gammas[0]

    measured = {
        "filter_half_width": CENTRAL_LOBE_HALF_WIDTH,
        "pump_duration_s": FILTER_PUMP_DURATION,
        "min_normalized": central.min_normalized,
        "min_normalized_filt": central.min_normalized_filt,
        "band_width": central.band_width,
        "band_width_filt": central.band_width_filt,
        "cw_min_normalized": cw_central.min_normalized,
        "cw_min_normalized_filt": cw_central.min_normalized_filt,
        "full_band_relative_error": full_band_error,
    }
    note = "improvement measured on the finite-pump decomposition; CW filtering values are informational"
    if central.min_normalized is None or central.min_normalized_filt is None:
        return False, measured, "no finite minimum"
    passed = (
        central.min_normalized_filt < central.min_normalized
        and central.band_width_filt > central.band_width
        and same_mask
        and full_band_error <= 1e-8
    )
    return passed, measured, note


@criterion(
    "cw_reduction",
    "CW reduction against a long pulse",
    "the antidiagonal CW amplitude is the long-pulse limit of the two-dimensional one",
    budget_s=300.0,
)
def check_cw_reduction(config: RunConfig, workers: int) -> Outcome:
    cw = device_config(config, _gammas([0.04, FILTER_GAMMA]))
    # keep every mode so truncation does not bias the long-pulse photon numbers
    pulsed = derive(
        cw, "pump.regime=pulsed", f"pump.duration_s={LONG_PULSE_DURATION!r}", f"schmidt.k_max={cw.grid.points}"
    )
    cw_curves = run_phase_sweep(cw, workers=workers).curves
    pulsed_curves = run_phase_sweep(pulsed, workers=workers).curves

    low_cw, low_pulsed = cw_curves[0.04][0], pulsed_curves[0.04][0]
    ratio_error = float(np.max(np.abs(low_cw.N / low_cw.N[0] - low_pulsed.N / low_pulsed.N[0])))
    cw_min = cw_curves[FILTER_GAMMA][0].minimum()[1]
    pulsed_min = pulsed_curves[FILTER_GAMMA][0].minimum()[1]
    min_error = _relative(pulsed_min, cw_min)
    measured = {
        "pump_duration_s": LONG_PULSE_DURATION,
        "low_gain_photon_ratio_error": ratio_error,
        "min_normalized_cw": cw_min,
        "min_normalized_pulsed": pulsed_min,
        "min_relative_error": min_error,
    }
    return ratio_error <= CW_RATIO_TOLERANCE and min_error <= CW_MIN_TOLERANCE, measured, None


def _coherent_asymptote_error(cfg: RunConfig, gamma: float, workers: int) -> float:
    coherent = _first_curve(run_phase_sweep(derive(cfg, _gammas([gamma])), workers=workers))[0]
    vacuum = _first_curve(
        run_phase_sweep(derive(cfg, _gammas([gamma]), "seed.kind=vacuum", "detection.kind=direct"), workers=workers)
    )[0]
    inside = (coherent.phis > 0) & (coherent.phis < 2 * math.pi)
    strong_seed = cfg.seed.alpha2 > 100.0 * vacuum.N
    usable = inside & strong_seed & np.isfinite(coherent.normalized)
    if not usable.any():
        return math.nan
    envelope = asymptote_coherent_direct(gamma, coherent.phis[usable])
    return float(np.max(np.abs(coherent.normalized[usable] / envelope - 1.0)))


@criterion("seeding", "Seeding gives no advantage", "coherent seeds stay at or above the shot-noise limit")
def check_seeding(config: RunConfig, workers: int) -> Outcome:
    gammas = [1.3, 2.5, 5.0]
    setups = {
        "coherent_direct": ("seed.kind=coherent_first_mode", "seed.alpha2=1e6", "detection.kind=direct"),
        "homodyne_first_mode": ("seed.kind=coherent_first_mode", "seed.alpha2=1e6", "detection.kind=homodyne"),
        "homodyne_plane_wave": ("seed.kind=coherent_plane_wave", "seed.alpha2=1e6", "detection.kind=homodyne"),
    }
    measured: Dict[str, Any] = {}
    passed = True
    for name, overrides in setups.items():
        frame = run_gain_sweep(device_config(config, _gammas(gammas), *overrides), workers=workers).frame
        minima = frame["min_normalized"].to_numpy()
        measured[name] = minima.tolist()
        passed = passed and bool(np.all(minima >= 1.0 - SEED_FLOOR_TOLERANCE))

    coherent = device_config(config, *setups["coherent_direct"])
    errors = [_coherent_asymptote_error(coherent, g, workers) for g in gammas]
    measured["coherent_asymptote_error"] = errors
    finite_errors = [e for e in errors if math.isfinite(e)]
    passed = passed and bool(finite_errors) and max(finite_errors) <= 0.05
    return passed, measured, None


@criterion("single_photon", "Single-photon seed", "seeded shot-noise limit tends to 1; weak-gain seeding hurts")
def check_single_photon(config: RunConfig, workers: int) -> Outcome:
    cfg = device_config(config)
    context = build_context(cfg)
    zero = compute_point(context, 0.0, Variant.COMPENSATED)
    single = compute_point(context, 0.0, Variant.SINGLE_SECTION)
    gamma = 1e-3
    g1 = cfg.snl.single_section_ratio * calibrate_gain(zero, gamma).gain_at(zero.raw_norm)
    snl = single_photon_snl(single.eigenvalues, g1)

    gammas = [0.1, 0.3]
    vacuum = run_gain_sweep(device_config(config, _gammas(gammas)), workers=workers).frame
    seeded = run_gain_sweep(
        device_config(config, _gammas(gammas), "seed.kind=single_photon_first_mode"), workers=workers
    ).frame
    v_min = vacuum["min_normalized"].to_numpy()
    s_min = seeded["min_normalized"].to_numpy()
    measured = {"seeded_snl_gamma_1e-3": snl, "vacuum_min": v_min.tolist(), "seeded_min": s_min.tolist()}
    return abs(snl - 1.0) <= 1e-3 and bool(np.all(s_min > v_min)), measured, None


@criterion("oracles", "Oracle equivalence", "Fock-space brute force and the double-Gaussian Schmidt spectrum")
def check_oracles(config: RunConfig, workers: int) -> Outcome:
    gammas = np.array([0.3, 0.2, 0.1])
    fock_n, fock_var = fock_moments(gammas)
    closed_n = mean_photons_vacuum(gammas**2, 1.0)
    closed_var = variance_vacuum(gammas**2, 1.0)

    kernel = np.array([[0.2, 0.1j], [0.05, 0.15]])
    singular = np.linalg.svd(kernel, compute_uv=False)
    kernel_n, kernel_var = fock_kernel_moments(kernel)

    grid = build_grid(50.0, 10.0, 161)
    dec = schmidt_decompose(double_gaussian_jsa(grid, tau=1.0, sigma=0.5), k_max=None)
    exact = mehler_eigenvalues(1.0, 0.5, 4)
    mehler_error = float(np.max(np.abs(dec.eigenvalues[:4] / exact - 1.0)))

    errors = {
        "fock_mean": _relative(fock_n, closed_n),
        "fock_variance": _relative(fock_var, closed_var),
        "kernel_mean": _relative(kernel_n, mean_photons_vacuum(singular**2, 1.0)),
        "kernel_variance": _relative(kernel_var, variance_vacuum(singular**2, 1.0)),
        "mehler_eigenvalues": mehler_error,
    }
    return all(e <= ORACLE_TOLERANCE for e in errors.values()), errors, None


@criterion("hygiene", "Numerical hygiene", "completeness, orthonormality, derivatives, determinism, refinement")
def check_hygiene(config: RunConfig, workers: int) -> Outcome:
    pulsed = derive(config, "pump.regime=pulsed", "device.variant=compensated", "filter=null")
    dec = decompose_at(build_context(pulsed), math.pi / 2, Variant.COMPENSATED)
    completeness = abs(float(np.sum(dec.eigenvalues)) + dec.tail_mass - 1.0)
    modes = dec.modes.signal_matrix()
    gram = (np.conj(modes) * dec.modes.w_s) @ modes.T
    orthonormality = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))

    cfg = device_config(config, _gammas([1.3]), "phi.count=64")
    series, _ = _first_curve(run_phase_sweep(cfg, workers=workers))
    quarter = int(np.argmin(np.abs(series.phis - math.pi / 2)))
    fd_change = richardson_check(series.N, series.phis, quarter)["relative_change"]

    compute_point.cache_clear()
    serial = run_phase_sweep(cfg, workers=1).frame
    compute_point.cache_clear()
    parallel = run_phase_sweep(cfg, workers=max(2, workers)).frame
    deterministic = bool(serial.equals(parallel))

    gate = convergence_gate(device_config(config), workers=workers)
    measured = {
        "completeness_error": completeness,
        "orthonormality_error": orthonormality,
        "finite_difference_change": fd_change,
        "deterministic": deterministic,
        "gate_max_drift": gate.max_drift,
    }
    passed = completeness <= 1e-10 and orthonormality <= 1e-10 and fd_change <= 1e-2 and deterministic and gate.passed
    return passed, measured, None


def run_acceptance(
    config: Optional[RunConfig] = None,
    workers: Optional[int] = None,
    only: Optional[Sequence[str]] = None,
) -> AcceptanceReport:
    """Run every registered criterion (or those named in ``only``)."""
    config = config or RunConfig()
    workers = workers or settings.threads
    keys = list(only) if only else list(CRITERIA)
    results = []
    for key in keys:
        result = CRITERIA[key].run(config, workers)
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"{key}: {'PASS' if result.passed else 'FAIL'} ({result.runtime_s:.1f}s)")
        results.append(result)
    return AcceptanceReport(config_hash=config_hash(config), passed=all(r.passed for r in results), criteria=results)


def format_report(report: AcceptanceReport) -> str:
    lines = [f"Acceptance report for config {report.config_hash}"]
    for r in report.criteria:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.key}: {r.title} ({r.runtime_s:.1f}s)")
        lines.append(f"    anchor: {r.anchor}")
        for name, value in r.measured.items():
            lines.append(f"    {name}: {value}")
        if r.note:
            lines.append(f"    note: {r.note}")
    lines.append("ALL PASS" if report.passed else "FAILURES PRESENT")
    return "\n".join(lines)
