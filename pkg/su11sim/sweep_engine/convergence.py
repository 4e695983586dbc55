"""Grid-refinement gate: re-run probe phases at doubled resolution."""

import logging
import math
from typing import Dict, List, Optional

from pydantic import BaseModel

from su11sim.config.run_config import RunConfig
from su11sim.errors import ConvergenceGateFailed
from su11sim.observables.sensitivity import phase_sensitivity, snl_vacuum
from su11sim.observables.vacuum import mean_photons_vacuum, photon_rate, variance_vacuum
from su11sim.phasematch.mismatch import Variant
from su11sim.schmidt.calibration import calibrate_gain
from su11sim.sweep_engine.context import build_context
from su11sim.sweep_engine.worker import PhaseWorker, SweepContext

logger = logging.getLogger(__name__)

DRIFT_FLOOR = 1e-300


class GateEntry(BaseModel):
    quantity: str
    phi: Optional[float] = None
    coarse: float
    fine: float
    drift: float


class ConvergenceReport(BaseModel):
    passed: bool
    threshold: float
    max_drift: float
    gamma: float
    points_coarse: int
    points_fine: int
    entries: List[GateEntry]


def phase_step(config: RunConfig) -> float:
    section = config.phi
    intervals = section.count - 1 if section.endpoint else section.count
    return (section.stop - section.start) / intervals


def _probe_values(
    context: SweepContext,
    probe_phis: List[float],
    step: float,
    gamma: float,
    ratio: float,
    workers: int,
) -> Dict[str, Dict[Optional[float], float]]:
    """Gate quantities at one resolution: raw-norm ratio, normalized sensitivity and N(0)."""
    worker = PhaseWorker(context, workers)
    variant = Variant(context.geometry.variant)
    zero = worker.single(0.0, variant)
    single = worker.single(0.0, Variant.SINGLE_SECTION)
    calibration = calibrate_gain(zero, gamma)
    g_zero = calibration.gain_at(zero.raw_norm)
    snl = snl_vacuum(single.eigenvalues, ratio * g_zero)

    phis = []
    for phi in probe_phis:
        phis.extend([phi - step, phi, phi + step])
    points = worker.run(phis, variant)

    values: Dict[str, Dict[Optional[float], float]] = {"raw_ratio": {}, "normalized": {}}
    for i, phi in enumerate(probe_phis):
        before, center, after = points[3 * i : 3 * i + 3]
        n_before = mean_photons_vacuum(before.eigenvalues, calibration.gain_at(before.raw_norm))
        n_after = mean_photons_vacuum(after.eigenvalues, calibration.gain_at(after.raw_norm))
        variance = variance_vacuum(center.eigenvalues, calibration.gain_at(center.raw_norm))
        dphi, _ = phase_sensitivity(variance, (n_after - n_before) / (2.0 * step))
        values["raw_ratio"][phi] = center.raw_norm / zero.raw_norm
        values["normalized"][phi] = dphi / snl

    n0 = mean_photons_vacuum(zero.eigenvalues, g_zero)
    if context.is_cw:
        values["photon_rate_phi0"] = {None: photon_rate(n0, context.grid.spacing)}
    else:
        values["mean_photons_phi0"] = {None: n0}
    return values


def _drift(coarse: float, fine: float) -> float:
    if coarse == fine:
        return 0.0
    if not (math.isfinite(coarse) and math.isfinite(fine)):
        return math.inf
    return abs(fine - coarse) / max(abs(fine), DRIFT_FLOOR)


def convergence_gate(
    config: RunConfig,
    points: Optional[int] = None,
    workers: int = 1,
) -> ConvergenceReport:
    """Compare vacuum observables at the probe phases on a grid and its refinement.

    The refined grid halves the spacing over the same span. A quantity
    drifts by |fine - coarse| / |fine|; the gate passes when every drift
    stays below ``convergence.threshold``.

    Args:
        config: Validated run configuration
        points: Coarse grid points per axis (defaults to ``grid.points``)
        workers: Thread count for the probe evaluations
    """
    gamma = config.convergence.probe_gamma or config.gammas[0]
    step = phase_step(config)
    probes = [float(p) for p in config.convergence.probe_phis]

    coarse_ctx = build_context(config, points=points, filter_option="none")
    fine_ctx = build_context(config, filter_option="none", grid=coarse_ctx.grid.refined())
    ratio = config.snl.single_section_ratio

    coarse = _probe_values(coarse_ctx, probes, step, gamma, ratio, workers)
    fine = _probe_values(fine_ctx, probes, step, gamma, ratio, workers)

    entries = []
    for quantity, by_phi in coarse.items():
        for phi, value in by_phi.items():
            refined = fine[quantity][phi]
            entries.append(GateEntry(quantity=quantity, phi=phi, coarse=value, fine=refined, drift=_drift(value, refined)))

    max_drift = max(e.drift for e in entries)
    threshold = config.convergence.threshold
    report = ConvergenceReport(
        passed=max_drift < threshold,
        threshold=threshold,
        max_drift=max_drift,
        gamma=gamma,
        points_coarse=coarse_ctx.grid.n_s,
        points_fine=fine_ctx.grid.n_s,
        entries=entries,
    )
    logger.info(
        f"Convergence gate {'passed' if report.passed else 'failed'}: max drift {max_drift:.3e} "
        f"({report.points_coarse} -> {report.points_fine} points)"
    )
    return report


def apply_gate(report: ConvergenceReport, mode: str) -> None:
    """``flag`` logs a failed gate, ``strict`` raises it, ``off`` ignores it.

    Raises:
        ConvergenceGateFailed: strict mode and the gate did not pass
    """
    if report.passed or mode == "off":
        return
    if mode == "strict":
        raise ConvergenceGateFailed(report.model_dump())
    worst = max(report.entries, key=lambda e: e.drift)
    logger.warning(
        f"Convergence gate flagged: {worst.quantity} drifts {worst.drift:.3e} "
        f"(coarse {worst.coarse:.6e}, fine {worst.fine:.6e}); results may be under-resolved"
    )
