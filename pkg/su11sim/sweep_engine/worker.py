"""Per-phase tasks and the thread pool that runs them."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from su11sim.dispersion.model import DispersionModel
from su11sim.errors import DegenerateJSA
from su11sim.filtering.filters import BandProjection, FilterSpec, project_band
from su11sim.jsa.builder import build_jsa
from su11sim.jsa.grid import FrequencyGrid
from su11sim.phasematch.mismatch import DeviceGeometry, ModulatorSpec, PumpSpec, Regime, Variant
from su11sim.schmidt.decomposition import ModeBasis, SchmidtDecomposition, schmidt_decompose
from su11sim.seeding.homodyne import center_density
from su11sim.utils.logging_config import SWEEP_LOGGER
from su11sim.utils.performance import memoize

logger = logging.getLogger(__name__)
sweep_logger = logging.getLogger(SWEEP_LOGGER)


@dataclass(frozen=True, eq=False)
class SweepContext:
    """Everything a phase task needs, fixed for the whole sweep."""

    model: DispersionModel
    geometry: DeviceGeometry
    pump: PumpSpec
    grid: FrequencyGrid
    chirp_slope: float
    k_max: Optional[int]
    track_depth: int
    band_weights: Optional[np.ndarray]
    physics_hash: str
    filter_spec: Optional[FilterSpec] = None

    @property
    def is_cw(self) -> bool:
        return self.pump.regime == Regime.CW


@dataclass(frozen=True, eq=False)
class SweepPoint:
    """Compact result of one decomposition; full mode sets are not kept."""

    phi: float
    variant: Variant
    raw_norm: float
    eigenvalues: np.ndarray
    tail_mass: float
    center_density: np.ndarray
    tracking: Optional[ModeBasis]
    band: Optional[BandProjection]

    @property
    def is_zero(self) -> bool:
        return self.raw_norm == 0.0

    @classmethod
    def zero(cls, phi: float, variant: Variant, with_band: bool) -> "SweepPoint":
        """Stand-in for a vanishing amplitude: no photons at any gain."""
        empty = np.zeros(1)
        band = BandProjection(mass=empty, cross=empty) if with_band else None
        return cls(
            phi=phi,
            variant=variant,
            raw_norm=0.0,
            eigenvalues=np.ones(1),
            tail_mass=0.0,
            center_density=empty,
            tracking=None,
            band=band,
        )


def summarize(dec: SchmidtDecomposition, context: SweepContext, phi: Optional[float] = None) -> SweepPoint:
    band = None
    if context.band_weights is not None:
        band = project_band(dec.modes, context.band_weights)
    return SweepPoint(
        phi=dec.phi if phi is None else float(phi),
        variant=dec.variant,
        raw_norm=dec.raw_norm,
        eigenvalues=dec.eigenvalues,
        tail_mass=dec.tail_mass,
        center_density=center_density(dec),
        tracking=dec.modes.truncated(context.track_depth),
        band=band,
    )


def decompose_at(context: SweepContext, phi: float, variant: Variant) -> SchmidtDecomposition:
    """Build and decompose the JSA at one modulator phase."""
    modulator = ModulatorSpec(phi=phi, chirp_slope=context.chirp_slope)
    jsa = build_jsa(context.model, context.geometry, context.pump, modulator, context.grid, variant=variant)
    return schmidt_decompose(jsa, k_max=context.k_max)


def _point_key(context: SweepContext, phi: float, variant: Variant):
    return (context.physics_hash, context.grid.digest(), Variant(variant).value, float(phi))


@memoize(key=_point_key, maxsize=4096)
def compute_point(context: SweepContext, phi: float, variant: Variant) -> SweepPoint:
    """Sweep point at ``phi``; a vanishing amplitude away from phi = 0 gives a zero point.

    Raises:
        DegenerateJSA: the amplitude vanishes at phi = 0, where the gain is calibrated
    """
    try:
        dec = decompose_at(context, phi, variant)
    except DegenerateJSA:
        if math.isclose(math.fmod(phi, 2.0 * math.pi), 0.0, abs_tol=1e-15):
            raise
        logger.warning(f"{Variant(variant).value} amplitude vanishes at phi={phi:.6f}; recording zero photons")
        return SweepPoint.zero(phi, Variant(variant), context.band_weights is not None)
    sweep_logger.debug(f"phi={phi:.6f} {dec.variant.value}: raw={dec.raw_norm:.6e} lambda1={dec.eigenvalues[0]:.6e}")
    return summarize(dec, context, phi)


class PhaseWorker:
    """Thread pool evaluating sweep points in parallel.

    Results come back in input order, so output does not depend on the
    number of workers.
    """

    def __init__(self, context: SweepContext, max_workers: int = 1):
        self.context = context
        self.max_workers = max(1, int(max_workers))

    def run(self, phis: Sequence[float], variant: Variant) -> List[SweepPoint]:
        phis = [float(p) for p in phis]
        if self.max_workers == 1 or len(phis) < 2:
            return [compute_point(self.context, phi, variant) for phi in phis]
        logger.debug(f"Evaluating {len(phis)} phases on {self.max_workers} threads")
        with ThreadPoolExecutor(max_workers=self.max_workers, thread_name_prefix="su11-phase") as pool:
            return list(pool.map(lambda phi: compute_point(self.context, phi, variant), phis))

    def single(self, phi: float, variant: Variant) -> SweepPoint:
        return compute_point(self.context, float(phi), variant)
