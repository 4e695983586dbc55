"""Phase and gain sweeps over a validated run configuration.

Every phase point is decomposed once; observables for all requested gains
are evaluated from the stored eigenvalues, so a gain sweep costs one phase
sweep plus cheap per-gain arithmetic.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from su11sim.config import settings
from su11sim.config.run_config import PhiSection, RunConfig, config_hash
from su11sim.errors import AllInfinite
from su11sim.filtering.filters import filtered_snl_from_mass
from su11sim.observables.sensitivity import ObservableSeries, assemble_series, band_width, snl_vacuum, visibility
from su11sim.observables.vacuum import mean_photons_vacuum, mode_gains, photon_rate, truncation_bound, variance_vacuum
from su11sim.phasematch.mismatch import Variant
from su11sim.schmidt.calibration import calibrate_gain, schmidt_number
from su11sim.schmidt.tracking import track_first_mode
from su11sim.seeding.direct import seeded_direct_coherent, seeded_direct_single_photon
from su11sim.seeding.homodyne import homodyne_first_mode, homodyne_plane_wave
from su11sim.seeding.specs import DetectionKind, SeedKind
from su11sim.sweep_engine.context import FilterOption, build_context
from su11sim.sweep_engine.convergence import ConvergenceReport, apply_gate, convergence_gate
from su11sim.sweep_engine.results import GammaSummary, SweepResult, SweepSummary, gain_frame, phase_frame
from su11sim.sweep_engine.worker import PhaseWorker, SweepContext, SweepPoint
from su11sim.utils.logging_config import SWEEP_LOGGER
from su11sim.utils.performance import Stopwatch

logger = logging.getLogger(__name__)
sweep_logger = logging.getLogger(SWEEP_LOGGER)

FIRST_MODE_SEEDS = (SeedKind.SINGLE_PHOTON_FIRST_MODE, SeedKind.COHERENT_FIRST_MODE)


def phase_grid(section: PhiSection) -> np.ndarray:
    return np.linspace(section.start, section.stop, section.count, endpoint=section.endpoint)


@dataclass(frozen=True, eq=False)
class PhaseSweepData:
    """Decomposed phase points shared by every gain of a sweep."""

    context: SweepContext
    phis: np.ndarray
    points: List[SweepPoint]
    zero: SweepPoint
    single: SweepPoint
    first_indices: Optional[List[int]]


def collect_phase_data(
    context: SweepContext,
    config: RunConfig,
    phis: Sequence[float],
    workers: int = 1,
) -> PhaseSweepData:
    """Decompose the device at every phase, plus the calibration and reference points.

    Raises:
        DegenerateJSA: the amplitude vanishes at phi = 0
        ModeTrackingLost: a first-mode seed cannot follow its mode
    """
    worker = PhaseWorker(context, workers)
    variant = Variant(context.geometry.variant)
    phis = np.asarray(phis, dtype=float)
    points = worker.run(phis, variant)

    zero = next((p for p in points if p.phi == 0.0), None)
    if zero is None:
        zero = worker.single(0.0, variant)
    single = worker.single(0.0, Variant.SINGLE_SECTION)

    first = None
    if SeedKind(config.seed.kind) in FIRST_MODE_SEEDS:
        first = track_first_mode(
            [p.tracking for p in points],
            phis,
            threshold=config.schmidt.tracking_threshold,
            method=config.schmidt.first_mode,
        )
    return PhaseSweepData(context=context, phis=phis, points=points, zero=zero, single=single, first_indices=first)


@dataclass(frozen=True, eq=False)
class GammaEvaluation:
    series: ObservableSeries
    filtered: Optional[ObservableSeries]
    schmidt_numbers: np.ndarray
    summary: GammaSummary


def _seeded_series(
    data: PhaseSweepData,
    config: RunConfig,
    gains: List[float],
    g1: float,
) -> ObservableSeries:
    eigs = [p.eigenvalues for p in data.points]
    single = data.single.eigenvalues
    noise = config.observables.derivative_noise
    seed = SeedKind(config.seed.kind)
    detection = DetectionKind(config.detection.kind)
    alpha2 = config.seed.alpha2

    if seed == SeedKind.VACUUM:
        means = [mean_photons_vacuum(e, g) for e, g in zip(eigs, gains)]
        variances = [variance_vacuum(e, g) for e, g in zip(eigs, gains)]
        return assemble_series(
            data.phis, means, variances, snl_vacuum(single, g1), noise, tag={"seed": seed.value, "detection": "direct"}
        )
    if seed == SeedKind.SINGLE_PHOTON_FIRST_MODE:
        return seeded_direct_single_photon(
            eigs, gains, data.phis, single, g1, first=data.first_indices, derivative_noise=noise
        )
    if seed == SeedKind.COHERENT_FIRST_MODE and detection == DetectionKind.DIRECT:
        return seeded_direct_coherent(
            eigs, gains, data.phis, single, g1, alpha2=alpha2, first=data.first_indices, derivative_noise=noise
        )
    if seed == SeedKind.COHERENT_FIRST_MODE:
        return homodyne_first_mode(
            eigs,
            gains,
            data.phis,
            single,
            g1,
            alpha=math.sqrt(alpha2),
            theta_a=config.detection.theta_a,
            beta_lo=config.detection.beta_lo,
            first=data.first_indices,
            derivative_noise=noise,
        )
    return homodyne_plane_wave(
        eigs,
        gains,
        data.phis,
        single,
        g1,
        alpha=math.sqrt(alpha2),
        theta_a=config.detection.theta_a,
        beta_lo=config.detection.beta_lo,
        densities=[p.center_density for p in data.points],
        single_density=data.single.center_density,
        derivative_noise=noise,
    )


def _filtered_series(data: PhaseSweepData, config: RunConfig, gains: List[float], g1: float) -> ObservableSeries:
    means, variances = [], []
    for point, gain in zip(data.points, gains):
        occupations = np.sinh(mode_gains(point.eigenvalues, gain)) ** 2
        means.append(point.band.mean(occupations))
        variances.append(point.band.variance(occupations))
    snl = filtered_snl_from_mass(data.single.eigenvalues, data.single.band.mass, g1)
    return assemble_series(
        data.phis,
        means,
        variances,
        snl,
        config.observables.derivative_noise,
        tag={"filter_half_width": data.context.filter_spec.half_width},
    )


def _minimum(series: ObservableSeries, gamma: float, label: str) -> Tuple[Optional[float], Optional[float]]:
    try:
        return series.minimum()
    except AllInfinite:
        logger.warning(f"gamma={gamma:g}: every {label} sensitivity value is infinite; no minimum reported")
        return None, None


def evaluate_gamma(data: PhaseSweepData, gamma: float, config: RunConfig) -> GammaEvaluation:
    """Observables of every phase point at gain parameter ``gamma``.

    Raises:
        ZeroPhotons: the single-section reference carries no photons
    """
    calibration = calibrate_gain(data.zero, gamma)
    gains = [calibration.gain_at(p.raw_norm) for p in data.points]
    g_zero = calibration.gain_at(data.zero.raw_norm)
    g1 = config.snl.single_section_ratio * g_zero

    series = _seeded_series(data, config, gains, g1)
    filtered = None
    if data.context.band_weights is not None:
        filtered = _filtered_series(data, config, gains, g1)

    schmidt_numbers = np.array([schmidt_number(p.eigenvalues, g) for p, g in zip(data.points, gains)])
    budget = max((truncation_bound(p, g) for p, g in zip(data.points, gains)), default=0.0)

    phi_star, minimum = _minimum(series, gamma, "unfiltered")
    bands = series.bands()
    n0 = mean_photons_vacuum(data.zero.eigenvalues, g_zero)
    summary = GammaSummary(
        gamma=gamma,
        phi_star=phi_star,
        min_normalized=minimum,
        bands=bands,
        band_width=band_width(bands),
        visibility=visibility(series.N),
        mean_photons_phi0=n0,
        photon_rate_phi0=photon_rate(n0, data.context.grid.spacing) if data.context.is_cw else None,
        truncation_budget=budget,
    )
    if filtered is not None:
        phi_f, min_f = _minimum(filtered, gamma, "filtered")
        bands_f = filtered.bands()
        summary.phi_star_filt = phi_f
        summary.min_normalized_filt = min_f
        summary.bands_filt = bands_f
        summary.band_width_filt = band_width(bands_f)

    sweep_logger.info(
        f"gamma={gamma:g}: min normalized {minimum if minimum is not None else float('inf'):.6g} "
        f"at phi={phi_star if phi_star is not None else float('nan'):.6g}, N(0)={n0:.6e}"
    )
    return GammaEvaluation(series=series, filtered=filtered, schmidt_numbers=schmidt_numbers, summary=summary)


def _gate(config: RunConfig, workers: int) -> Optional[ConvergenceReport]:
    if config.convergence.mode == "off":
        return None
    report = convergence_gate(config, workers=workers)
    apply_gate(report, config.convergence.mode)
    return report


def _prepare(
    config: RunConfig,
    filter_option: FilterOption,
    workers: Optional[int],
) -> Tuple[PhaseSweepData, int]:
    workers = workers or settings.threads
    context = build_context(config, filter_option=filter_option)
    data = collect_phase_data(context, config, phase_grid(config.phi), workers)
    return data, workers


def _summary(
    kind: str,
    config: RunConfig,
    data: PhaseSweepData,
    workers: int,
    wall_time: float,
    report: Optional[ConvergenceReport],
    gammas: List[GammaSummary],
) -> SweepSummary:
    spec = data.context.filter_spec
    return SweepSummary(
        kind=kind,
        config_hash=config_hash(config),
        variant=Variant(data.context.geometry.variant).value,
        regime=data.context.pump.regime.value,
        seed=SeedKind(config.seed.kind).value,
        detection=DetectionKind(config.detection.kind).value,
        filter_half_width=spec.half_width if spec is not None else None,
        grid=data.context.grid.describe(),
        phi=config.phi.model_dump(),
        workers=workers,
        wall_time_s=wall_time,
        convergence=report.model_dump() if report is not None else None,
        gammas=gammas,
    )


def run_phase_sweep(
    config: RunConfig,
    gammas: Optional[Sequence[float]] = None,
    filter_option: FilterOption = None,
    workers: Optional[int] = None,
) -> SweepResult:
    """Observables versus phase for each gain; rows sorted by (gamma, phi).

    Args:
        config: Validated run configuration
        gammas: Gain parameters, overriding ``config.gammas``
        filter_option: Band-pass filter (see ``build_context``)
        workers: Thread count; defaults to ``settings.threads``

    Raises:
        ConvergenceGateFailed: strict gate mode and the grid has not converged
    """
    gammas = sorted(float(g) for g in (gammas or config.gammas))
    with Stopwatch("phase sweep") as watch:
        data, workers = _prepare(config, filter_option, workers)
        frames, summaries, curves = [], [], {}
        for gamma in gammas:
            ev = evaluate_gamma(data, gamma, config)
            frames.append(phase_frame(gamma, ev.series, ev.schmidt_numbers, ev.filtered))
            summaries.append(ev.summary)
            curves[gamma] = (ev.series, ev.filtered)
        report = _gate(config, workers)

    frame = pd.concat(frames, ignore_index=True)
    summary = _summary("phase", config, data, workers, watch.elapsed, report, summaries)
    logger.info(f"Phase sweep {summary.config_hash}: {len(data.phis)} phases x {len(gammas)} gains in {watch.elapsed:.2f}s")
    return SweepResult(kind="phase", frame=frame, summary=summary, curves=curves)


def run_gain_sweep(
    config: RunConfig,
    gammas: Optional[Sequence[float]] = None,
    filter_option: FilterOption = None,
    workers: Optional[int] = None,
) -> SweepResult:
    """Minimum normalized sensitivity and its phase for each gain.

    The phase points are decomposed once and reused for every gain.
    """
    gammas = sorted(float(g) for g in (gammas or config.gammas))
    with Stopwatch("gain sweep") as watch:
        data, workers = _prepare(config, filter_option, workers)
        summaries = [evaluate_gamma(data, gamma, config).summary for gamma in gammas]
        report = _gate(config, workers)

    frame = gain_frame(summaries, filtered=data.context.band_weights is not None)
    summary = _summary("gain", config, data, workers, watch.elapsed, report, summaries)
    logger.info(f"Gain sweep {summary.config_hash}: {len(gammas)} gains in {watch.elapsed:.2f}s")
    return SweepResult(kind="gain", frame=frame, summary=summary)
