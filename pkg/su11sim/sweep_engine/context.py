"""Turning a validated RunConfig into the fixed inputs of a sweep."""

import hashlib
import json
import logging
from pathlib import Path
from typing import Optional, Union

from su11sim.config.run_config import RunConfig
from su11sim.dispersion.loader import load_dispersion_file
from su11sim.dispersion.model import DispersionModel, default_ktp, poling_period
from su11sim.filtering.filters import FilterSpec, filter_weights, resolve_filter
from su11sim.jsa.grid import FrequencyGrid, build_grid
from su11sim.phasematch.mismatch import DeviceGeometry, PumpSpec, Regime
from su11sim.seeding.specs import SeedKind
from su11sim.sweep_engine.worker import SweepContext

logger = logging.getLogger(__name__)

FilterOption = Union[FilterSpec, str, float, None]


def load_model(config: RunConfig) -> DispersionModel:
    if config.dispersion.file:
        return load_dispersion_file(config.dispersion.file)
    return default_ktp()


def resolve_poling_period(config: RunConfig, model: DispersionModel) -> float:
    if config.device.poling_period_m is not None:
        return config.device.poling_period_m
    period = poling_period(model, config.pump.wavelength_m)
    logger.info(f"Derived poling period {period * 1e6:.3f} um for {config.pump.wavelength_m * 1e9:.1f} nm pump")
    return period


def build_pump(config: RunConfig) -> PumpSpec:
    regime = Regime(config.pump.regime)
    tau = config.pump.duration_s if regime == Regime.PULSED else None
    return PumpSpec.from_wavelength(config.pump.wavelength_m, regime, tau)


def build_geometry(config: RunConfig, model: DispersionModel) -> DeviceGeometry:
    return DeviceGeometry(
        length=config.device.length_m,
        gap=config.device.gap_m,
        poling_period=resolve_poling_period(config, model),
        variant=config.device.variant,
        grating_phase=config.device.grating_phase_rad,
        include_gap_region=config.device.include_gap_region,
    )


def resolve_run_filter(config: RunConfig, option: FilterOption, center: float) -> Optional[FilterSpec]:
    """Filter from the CLI option, falling back to the config's ``filter`` section.

    Band-pass filtering is defined for the vacuum seed only; other seeds run
    unfiltered with a warning.
    """
    if isinstance(option, FilterSpec):
        spec = option
    elif option is not None:
        spec = resolve_filter(option, center)
    elif config.filter is not None:
        spec = FilterSpec(center=center, half_width=config.filter.half_width_rad_s)
    else:
        spec = None
    if spec is not None and SeedKind(config.seed.kind) != SeedKind.VACUUM:
        logger.warning(f"Filter ignored: band-pass detection is only modelled for the vacuum seed, not {config.seed.kind}")
        return None
    return spec


def physics_hash(config: RunConfig, filter_spec: Optional[FilterSpec] = None) -> str:
    """Digest of everything that changes a decomposition or its band projection."""
    payload = config.model_dump(
        mode="json",
        include={"dispersion", "device", "pump", "modulator", "grid", "schmidt"},
    )
    if config.dispersion.file:
        payload["dispersion_sha256"] = hashlib.sha256(Path(config.dispersion.file).read_bytes()).hexdigest()
    payload["filter"] = None if filter_spec is None else [filter_spec.center, filter_spec.half_width, filter_spec.shape.value]
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def build_context(
    config: RunConfig,
    points: Optional[int] = None,
    filter_option: FilterOption = None,
    grid: Optional[FrequencyGrid] = None,
) -> SweepContext:
    """Dispersion model, geometry, pump, grid and filter weights for one sweep.

    Args:
        config: Validated run configuration
        points: Grid points per axis, overriding ``grid.points``
        filter_option: FilterSpec, CLI filter string/half-width, or ``None``
            to use the config's filter section
        grid: Ready-made grid (e.g. a refined one); skips grid construction

    Raises:
        OutOfWindow: pump or grid outside the dispersion validity window
        NoSolution: no positive poling period can be derived
        BandOutsideGrid: filter band leaves the grid
    """
    model = load_model(config)
    pump = build_pump(config)
    pump.check_window(model)
    geometry = build_geometry(config, model)
    if grid is None:
        grid = build_grid(pump.center, config.grid.half_width_rad_s, points or config.grid.points, model=model)

    spec = resolve_run_filter(config, filter_option, pump.center)
    weights = filter_weights(grid, spec) if spec is not None else None
    k_max = config.schmidt.k_max_cw if pump.regime == Regime.CW else config.schmidt.k_max

    context = SweepContext(
        model=model,
        geometry=geometry,
        pump=pump,
        grid=grid,
        chirp_slope=config.modulator.chirp_slope,
        k_max=k_max,
        track_depth=config.schmidt.track_depth,
        band_weights=weights,
        physics_hash=physics_hash(config, spec),
        filter_spec=spec,
    )
    logger.debug(f"Sweep context {context.physics_hash}: {grid.n_s}x{grid.n_i} grid, k_max={k_max}")
    return context
