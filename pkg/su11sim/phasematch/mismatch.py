"""Pump envelope, phase mismatches and the phase-modulator model.

Sign convention: Delta beta = k_o(w_s + w_i) - k_o(w_s) - k_e(w_i) + 2*pi/Lambda.
The pump wavevector is evaluated at w_s + w_i so the mismatch is exact
inside the pump envelope; for a CW pump the two coincide.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from su11sim.dispersion.model import DispersionModel, Polarization, wavelength_to_omega, wavevector
from su11sim.errors import CWRegime, InvalidParameter, OutOfWindow

TWO_PI = 2.0 * math.pi

ArrayLike = Union[float, np.ndarray]


class Variant(str, Enum):
    NON_COMPENSATED = "noncompensated"
    COMPENSATED = "compensated"
    SINGLE_SECTION = "single_section"


class Regime(str, Enum):
    PULSED = "pulsed"
    CW = "cw"


@dataclass(frozen=True)
class PumpSpec:
    omega_p: float
    regime: Regime = Regime.PULSED
    tau: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if not self.omega_p > 0:
            raise InvalidParameter(f"pump frequency must be positive, got {self.omega_p}")
        if self.regime == Regime.PULSED and not (self.tau is not None and self.tau > 0):
            raise InvalidParameter("pulsed pump needs a positive duration tau")

    @classmethod
    def from_wavelength(cls, wavelength_m: float, regime: Regime = Regime.PULSED, tau: Optional[float] = None):
        return cls(wavelength_to_omega(wavelength_m), regime, tau)

    @property
    def center(self) -> float:
        return 0.5 * self.omega_p

    def check_window(self, model: DispersionModel) -> None:
        """Pump and degenerate frequencies must lie in the dispersion windows."""
        lo, hi = model.window(Polarization.ORDINARY)
        if not lo <= self.omega_p <= hi:
            raise OutOfWindow(self.omega_p, (lo, hi))
        for pol in Polarization:
            lo, hi = model.window(pol)
            if not lo <= self.center <= hi:
                raise OutOfWindow(self.center, (lo, hi))


@dataclass(frozen=True)
class ModulatorSpec:
    """Phase applied in the gap; ``phi`` is canonical, ``phi_raw`` as given."""

    phi: float = 0.0
    chirp_slope: float = 0.0
    phi_raw: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.phi) and math.isfinite(self.chirp_slope)):
            raise InvalidParameter("modulator phase and chirp slope must be finite")
        raw = self.phi if self.phi_raw is None else self.phi_raw
        object.__setattr__(self, "phi_raw", float(raw))
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)


@dataclass(frozen=True)
class DeviceGeometry:
    length: float
    gap: float
    poling_period: float
    variant: Variant = Variant.COMPENSATED
    grating_phase: float = 0.0
    include_gap_region: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not self.length > 0:
            raise InvalidParameter(f"section length must be > 0, got {self.length}")
        if not self.gap >= 0:
            raise InvalidParameter(f"gap length must be >= 0, got {self.gap}")
        if not self.poling_period > 0:
            raise InvalidParameter(f"poling period must be > 0, got {self.poling_period}")

    @property
    def grating_wavenumber(self) -> float:
        return TWO_PI / self.poling_period


def pump_envelope(spec: PumpSpec, omega_s: ArrayLike, omega_i: ArrayLike) -> ArrayLike:
    """Gaussian spectral envelope exp(-(w_s + w_i - w_p)^2 tau^2 / 2)."""
    if spec.regime == Regime.CW:
        raise CWRegime()
    detuning = (np.asarray(omega_s) + np.asarray(omega_i) - spec.omega_p) * spec.tau
    return np.exp(-0.5 * detuning**2)


def _mismatch(model: DispersionModel, period: float, omega_o: ArrayLike, omega_e: ArrayLike) -> ArrayLike:
    # evaluation order is shared with dispersion.degenerate_mismatch
    total = np.asarray(omega_o) + np.asarray(omega_e)
    bare = (
        wavevector(model, Polarization.ORDINARY, total)
        - wavevector(model, Polarization.ORDINARY, omega_o)
        - wavevector(model, Polarization.EXTRAORDINARY, omega_e)
    )
    return bare + TWO_PI / period


def delta_beta(model: DispersionModel, period: float, omega_s: ArrayLike, omega_i: ArrayLike) -> ArrayLike:
    """Mismatch with the signal ordinary and the idler extraordinary."""
    return _mismatch(model, period, omega_s, omega_i)


def delta_beta_bar(model: DispersionModel, period: float, omega_s: ArrayLike, omega_i: ArrayLike) -> ArrayLike:
    """Mismatch after the polarization converter (signal extraordinary)."""
    return _mismatch(model, period, omega_i, omega_s)


def modulator_phase(spec: ModulatorSpec, omega_i: ArrayLike, omega_center: float) -> ArrayLike:
    """phi * (1 + chirp_slope * (w_i - w_p/2)); exactly phi when unchirped."""
    w = np.asarray(omega_i, dtype=float)
    if spec.chirp_slope == 0.0:
        out = np.full_like(w, spec.phi)
    else:
        out = spec.phi * (1.0 + spec.chirp_slope * (w - omega_center))
    return float(out) if w.ndim == 0 else out
