"""Joint spectral amplitude builders for each device variant.

Pulsed pumps give a dense matrix F[j, m] over (w_s[j], w_i[m]). A CW pump is
handled as the exact antidiagonal reduction: a 1-D profile f(Omega) with
w_i = w_p - w_s pinned, stored on the antidiagonal of the square grid so that
the usual quadrature norm still applies.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from su11sim.dispersion.model import DispersionModel
from su11sim.errors import DegenerateJSA, InvalidParameter
from su11sim.jsa.grid import FrequencyGrid
from su11sim.phasematch.mismatch import (
    DeviceGeometry,
    ModulatorSpec,
    PumpSpec,
    Regime,
    Variant,
    delta_beta,
    delta_beta_bar,
    modulator_phase,
    pump_envelope,
)
from su11sim.utils.performance import measure_time

logger = logging.getLogger(__name__)

DENSE = "dense"
ANTIDIAGONAL = "antidiagonal"


def sinc(x):
    """sin(x)/x with the removable singularity patched below |x| = 1e-8."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


@dataclass(frozen=True, eq=False)
class JointSpectralAmplitude:
    """Amplitude on a grid plus the norm it had before normalization.

    For the antidiagonal representation only ``profile`` is stored and the
    dense matrix is materialized on demand.
    """

    grid: FrequencyGrid
    phi: float
    raw_norm: float
    variant: Variant
    normalized: bool = True
    representation: str = DENSE
    matrix: Optional[np.ndarray] = field(default=None, repr=False)
    profile: Optional[np.ndarray] = field(default=None, repr=False)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def amplitude(self) -> np.ndarray:
        if self.representation == DENSE:
            return self.matrix
        n = self.grid.n_s
        dense = np.zeros((n, n), dtype=complex)
        cols = np.arange(n)[::-1]
        dense[np.arange(n), cols] = self.profile / np.sqrt(self.grid.w_i[cols])
        return dense

    @property
    def is_antidiagonal(self) -> bool:
        return self.representation == ANTIDIAGONAL

    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def weighted_matrix(self) -> np.ndarray:
        """sqrt(w_s) F sqrt(w_i), whose Frobenius norm is the quadrature norm."""
        return np.sqrt(self.grid.w_s)[:, None] * self.amplitude * np.sqrt(self.grid.w_i)[None, :]

    def norm(self) -> float:
        if self.is_antidiagonal:
            return math.sqrt(float(np.sum(np.abs(self.profile) ** 2 * self.grid.w_s)))
        return weighted_norm(self.matrix, self.grid)


def weighted_norm(matrix: np.ndarray, grid: FrequencyGrid) -> float:
    # numpy sums pairwise, so the reduction order is fixed
    weights = np.outer(grid.w_s, grid.w_i)
    return math.sqrt(float(np.sum(np.abs(matrix) ** 2 * weights)))


def jsa_from_samples(
    matrix: np.ndarray,
    grid: FrequencyGrid,
    phi: float = 0.0,
    variant: Variant = Variant.SINGLE_SECTION,
    metadata: Optional[Dict[str, Any]] = None,
) -> JointSpectralAmplitude:
    """Normalize an arbitrary sampled amplitude (analytic test kernels etc.)."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (grid.n_s, grid.n_i):
        raise InvalidParameter(f"amplitude shape {matrix.shape} does not match grid ({grid.n_s}, {grid.n_i})")
    raw = weighted_norm(matrix, grid)
    if not raw > 0:
        raise DegenerateJSA()
    normalized = matrix / raw
    normalized.flags.writeable = False
    return JointSpectralAmplitude(
        grid=grid,
        phi=phi,
        raw_norm=raw,
        variant=Variant(variant),
        matrix=normalized,
        metadata=dict(metadata or {}),
    )


def _phase_matching(
    variant: Variant,
    model: DispersionModel,
    geom: DeviceGeometry,
    mod: ModulatorSpec,
    omega_s: np.ndarray,
    omega_i: np.ndarray,
    center: float,
) -> np.ndarray:
    """Phase-matching function of the chosen layout, without the pump envelope."""
    length, gap = geom.length, geom.gap
    db = delta_beta(model, geom.poling_period, omega_s, omega_i)

    if variant == Variant.SINGLE_SECTION:
        return sinc(0.5 * db * length) * np.exp(0.5j * db * length)

    # products keep gap = 0 well defined
    db_gap = db * gap
    db_prime_gap = db_gap + 2.0 * (modulator_phase(mod, omega_i, center) + geom.grating_phase)

    if variant == Variant.NON_COMPENSATED:
        f = (
            sinc(0.5 * db * length)
            * np.cos(0.25 * (2.0 * db * length + db_gap + db_prime_gap))
            * np.exp(1j * (db * length + 0.25 * db_gap + 0.25 * db_prime_gap))
        )
        if geom.include_gap_region and gap > 0:
            # unpoled gap: no grating wavevector, first-order weight pi/2
            bare = db - geom.grating_wavenumber
            f = f + (math.pi / (4.0 * length)) * gap * sinc(0.5 * bare * gap) * np.exp(
                1j * bare * (length + 0.5 * gap)
            )
        return f

    dbb = delta_beta_bar(model, geom.poling_period, omega_s, omega_i)
    first = sinc(0.5 * db * length) * np.exp(0.5j * db * length)
    second = sinc(0.5 * dbb * length) * np.exp(
        1j * (0.5 * dbb * length + db * length + 0.5 * (db_prime_gap + dbb * gap))
    )
    return 0.5 * (first + second)


def _finish_dense(
    values: np.ndarray, grid: FrequencyGrid, phi: float, variant: Variant, metadata: Dict[str, Any]
) -> JointSpectralAmplitude:
    raw = weighted_norm(values, grid)
    if not raw > 0:
        raise DegenerateJSA(f"{variant.value} amplitude vanishes at phi={phi:.6f}")
    matrix = values / raw
    matrix.flags.writeable = False
    return JointSpectralAmplitude(
        grid=grid, phi=phi, raw_norm=raw, variant=variant, matrix=matrix, metadata=metadata
    )


def _build_dense(
    variant: Variant,
    model: DispersionModel,
    geom: DeviceGeometry,
    pump: PumpSpec,
    mod: ModulatorSpec,
    grid: FrequencyGrid,
) -> JointSpectralAmplitude:
    omega_s, omega_i = np.meshgrid(grid.signal, grid.idler, indexing="ij")
    alpha = pump_envelope(pump, omega_s, omega_i)
    values = alpha * _phase_matching(variant, model, geom, mod, omega_s, omega_i, grid.center)
    metadata = {"regime": Regime.PULSED.value, "tau_s": pump.tau}
    return _finish_dense(values, grid, mod.phi, variant, metadata)


@measure_time
def build_jsa_noncompensated(model, geom: DeviceGeometry, pump: PumpSpec, mod: ModulatorSpec, grid: FrequencyGrid):
    """Two poled sections with the modulator between them, no converter."""
    if geom.variant != Variant.NON_COMPENSATED:
        raise InvalidParameter(f"expected a non-compensated geometry, got {geom.variant.value}")
    return _build_dense(Variant.NON_COMPENSATED, model, geom, pump, mod, grid)


@measure_time
def build_jsa_compensated(model, geom: DeviceGeometry, pump: PumpSpec, mod: ModulatorSpec, grid: FrequencyGrid):
    """Two poled sections with a polarization converter in the gap."""
    if geom.variant != Variant.COMPENSATED:
        raise InvalidParameter(f"expected a compensated geometry, got {geom.variant.value}")
    return _build_dense(Variant.COMPENSATED, model, geom, pump, mod, grid)


@measure_time
def build_jsa_single_section(model, geom: DeviceGeometry, pump: PumpSpec, grid: FrequencyGrid):
    """One poled section of length L; the shot-noise reference source."""
    return _build_dense(Variant.SINGLE_SECTION, model, geom, pump, ModulatorSpec(), grid)


@measure_time
def build_jsa_cw(
    model: DispersionModel,
    geom: DeviceGeometry,
    mod: ModulatorSpec,
    grid: FrequencyGrid,
    variant: Optional[Variant] = None,
) -> JointSpectralAmplitude:
    """Antidiagonal CW reduction over Omega = w_s - w_p/2.

    The compensated layout keeps the full two-term sum, so the residual
    non-cancellation away from Omega = 0 survives at phi = pi.

    Args:
        model: Dispersion model
        geom: Device geometry; ``variant`` overrides ``geom.variant``
        mod: Modulator phase
        grid: Square grid centred on w_p / 2
        variant: Layout to evaluate
    """
    variant = Variant(variant or geom.variant)
    if not grid.is_square:
        raise InvalidParameter("CW reduction needs identical signal and idler axes")

    omega_s = np.asarray(grid.signal)
    omega_i = np.asarray(grid.idler)[::-1]
    values = _phase_matching(variant, model, geom, mod, omega_s, omega_i, grid.center)

    raw = math.sqrt(float(np.sum(np.abs(values) ** 2 * grid.w_s)))
    if not raw > 0:
        raise DegenerateJSA(f"CW {variant.value} amplitude vanishes at phi={mod.phi:.6f}")
    profile = values / raw
    profile.flags.writeable = False
    return JointSpectralAmplitude(
        grid=grid,
        phi=mod.phi,
        raw_norm=raw,
        variant=variant,
        representation=ANTIDIAGONAL,
        profile=profile,
        metadata={"regime": Regime.CW.value},
    )


def build_jsa(
    model: DispersionModel,
    geom: DeviceGeometry,
    pump: PumpSpec,
    mod: ModulatorSpec,
    grid: FrequencyGrid,
    variant: Optional[Variant] = None,
) -> JointSpectralAmplitude:
    """Dispatch on pump regime and layout."""
    variant = Variant(variant or geom.variant)
    if pump.regime == Regime.CW:
        return build_jsa_cw(model, geom, mod, grid, variant=variant)
    if variant == Variant.SINGLE_SECTION:
        return build_jsa_single_section(model, geom, pump, grid)
    return _build_dense(variant, model, geom, pump, mod, grid)
