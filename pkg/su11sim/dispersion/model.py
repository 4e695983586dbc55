"""Refractive index, wavevector and group velocity per polarization.

Indices come either from a Sellmeier-type formula

    n^2 = A + B / (1 - C / lam^2) + D / (1 - E / lam^2) - F * lam^2

with lam in micrometres, or from a tabulated (omega, n) profile interpolated
with a cubic spline. Extrapolation is never performed: any query outside the
validity window raises ``OutOfWindow``.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import constants
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from su11sim.errors import InvalidParameter, NoSolution, OutOfWindow, StencilOutOfWindow

logger = logging.getLogger(__name__)

C_LIGHT = constants.c
TWO_PI = 2.0 * math.pi

ArrayLike = Union[float, np.ndarray]


def wavelength_to_omega(wavelength_m: float) -> float:
    return TWO_PI * C_LIGHT / wavelength_m


def omega_to_wavelength(omega: ArrayLike) -> ArrayLike:
    return TWO_PI * C_LIGHT / omega


class Polarization(str, Enum):
    ORDINARY = "o"
    EXTRAORDINARY = "e"


@dataclass(frozen=True)
class SellmeierProfile:
    """Generalized two-pole Sellmeier formula, wavelength in micrometres."""

    coeffs: Tuple[float, float, float, float, float, float]
    window: Tuple[float, float]
    name: str = "sellmeier"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) == 4:
            # A, B, C, F form without the second pole
            coeffs = (coeffs[0], coeffs[1], coeffs[2], 0.0, 0.0, coeffs[3])
        if len(coeffs) != 6:
            raise InvalidParameter(
                f"Sellmeier profile '{self.name}' needs 4 or 6 coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "window", _checked_window(self.window))

    def index(self, omega: np.ndarray) -> np.ndarray:
        a, b, c, d, e, f = self.coeffs
        lam2 = (omega_to_wavelength(omega) * 1e6) ** 2
        n2 = a + b / (1.0 - c / lam2) + d / (1.0 - e / lam2) - f * lam2
        return np.sqrt(n2)


@dataclass(frozen=True)
class TabulatedProfile:
    """Cubic-spline interpolation of (omega, n) samples."""

    omegas: Tuple[float, ...]
    indices: Tuple[float, ...]
    window: Optional[Tuple[float, float]] = None
    name: str = "table"
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        indices = np.asarray(self.indices, dtype=float)
        if omegas.ndim != 1 or omegas.shape != indices.shape or omegas.size < 2:
            raise InvalidParameter(f"table '{self.name}' needs at least two (omega, n) pairs")
        if np.any(np.diff(omegas) <= 0):
            raise InvalidParameter(f"table '{self.name}' must be strictly increasing in omega")

        window = self.window if self.window is not None else (omegas[0], omegas[-1])
        window = _checked_window(window)
        if window[0] < omegas[0] or window[1] > omegas[-1]:
            raise InvalidParameter(
                f"table '{self.name}' window {window} extends beyond its samples "
                f"[{omegas[0]:.6e}, {omegas[-1]:.6e}]"
            )

        object.__setattr__(self, "omegas", tuple(omegas))
        object.__setattr__(self, "indices", tuple(indices))
        object.__setattr__(self, "window", window)
        object.__setattr__(
            self, "_spline", CubicSpline(omegas, indices, bc_type="natural", extrapolate=False)
        )

    def index(self, omega: np.ndarray) -> np.ndarray:
        return self._spline(omega)


IndexProfile = Union[SellmeierProfile, TabulatedProfile]


def _checked_window(window: Sequence[float]) -> Tuple[float, float]:
    lo, hi = (float(w) for w in window)
    if not (0 < lo < hi) or not math.isfinite(hi):
        raise InvalidParameter(f"validity window must satisfy 0 < min < max, got [{lo}, {hi}]")
    return lo, hi


# Bulk KTP at room temperature. y axis (ordinary in this device):
# Kato & Takaoka, Appl. Opt. 41, 5040 (2002). z axis (extraordinary):
# Fradkin et al., Appl. Phys. Lett. 74, 914 (1999).
KTP_Y_COEFFS = (2.09930, 0.922683, 0.0467695, 0.0, 0.0, 0.0138408)
KTP_Z_COEFFS = (2.12725, 1.18431, 5.14852e-2, 0.6603, 100.00507, 9.68956e-3)
KTP_WINDOW = (wavelength_to_omega(2.0e-6), wavelength_to_omega(0.40e-6))


@dataclass(frozen=True)
class DispersionModel:
    """Immutable pair of index profiles, one per polarization."""

    ordinary: IndexProfile
    extraordinary: IndexProfile
    name: str = "custom"

    def __post_init__(self):
        for pol in Polarization:
            profile = self.profile(pol)
            lo, hi = profile.window
            samples = profile.index(np.linspace(lo, hi, 512))
            if not np.all(np.isfinite(samples)) or np.any(samples <= 1.0):
                raise InvalidParameter(
                    f"{self.name}: refractive index for polarization '{pol.value}' "
                    f"must stay finite and > 1 across its window"
                )

    def profile(self, pol: Polarization) -> IndexProfile:
        if pol == Polarization.ORDINARY:
            return self.ordinary
        return self.extraordinary

    def window(self, pol: Polarization) -> Tuple[float, float]:
        return self.profile(pol).window

    def with_profile(self, pol: Polarization, profile: IndexProfile) -> "DispersionModel":
        if pol == Polarization.ORDINARY:
            return DispersionModel(profile, self.extraordinary, name=f"{self.name}+{profile.name}")
        return DispersionModel(self.ordinary, profile, name=f"{self.name}+{profile.name}")


def default_ktp() -> DispersionModel:
    return DispersionModel(
        ordinary=SellmeierProfile(KTP_Y_COEFFS, KTP_WINDOW, name="ktp-y"),
        extraordinary=SellmeierProfile(KTP_Z_COEFFS, KTP_WINDOW, name="ktp-z"),
        name="ktp-bulk",
    )


def constant_index_model(n_o: float, n_e: float, window: Tuple[float, float]) -> DispersionModel:
    """Dispersionless (but possibly birefringent) model from flat two-point tables."""
    lo, hi = window
    return DispersionModel(
        ordinary=TabulatedProfile((lo, hi), (n_o, n_o), name=f"const-{n_o}"),
        extraordinary=TabulatedProfile((lo, hi), (n_e, n_e), name=f"const-{n_e}"),
        name="constant",
    )


def _as_output(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values) if scalar else values


def _check_window(window: Tuple[float, float], omega: np.ndarray) -> None:
    outside = (omega < window[0]) | (omega > window[1]) | ~np.isfinite(omega)
    if np.any(outside):
        raise OutOfWindow(float(omega[outside].flat[0]), window)


def refractive_index(model: DispersionModel, pol: Polarization, omega: ArrayLike) -> ArrayLike:
    """Refractive index n(pol, omega); scalar in, scalar out."""
    w = np.asarray(omega, dtype=float)
    profile = model.profile(pol)
    _check_window(profile.window, w)
    return _as_output(profile.index(w), w.ndim == 0)


def wavevector(model: DispersionModel, pol: Polarization, omega: ArrayLike) -> ArrayLike:
    """k = n(omega) * omega / c in rad/m."""
    w = np.asarray(omega, dtype=float)
    profile = model.profile(pol)
    _check_window(profile.window, w)
    return _as_output(profile.index(w) * w / C_LIGHT, w.ndim == 0)


def group_velocity(
    model: DispersionModel,
    pol: Polarization,
    omega: ArrayLike,
    rel_step: float = 1e-6,
) -> ArrayLike:
    """v = (dk/domega)^-1 by central difference with step ``rel_step * omega``."""
    w = np.asarray(omega, dtype=float)
    window = model.window(pol)
    _check_window(window, w)
    h = rel_step * w
    low, high = w - h, w + h
    bad = (low < window[0]) | (high > window[1])
    if np.any(bad):
        raise StencilOutOfWindow(float(w[bad].flat[0]), float(h[bad].flat[0]))
    dk = (wavevector(model, pol, high) - wavevector(model, pol, low)) / (2.0 * h)
    return _as_output(1.0 / dk, w.ndim == 0)


def degenerate_mismatch(model: DispersionModel, omega_p: float) -> float:
    """Bare type-II mismatch k_o(w_p) - k_o(w_p/2) - k_e(w_p/2), no grating."""
    half = 0.5 * omega_p
    return (
        wavevector(model, Polarization.ORDINARY, omega_p)
        - wavevector(model, Polarization.ORDINARY, half)
        - wavevector(model, Polarization.EXTRAORDINARY, half)
    )


def poling_period(
    model: DispersionModel,
    pump_wavelength: float,
    bracket: Tuple[float, float] = (1e-6, 1e-3),
) -> float:
    """Poling period zeroing the degenerate mismatch under the +2*pi/Lambda convention.

    Args:
        model: Dispersion model
        pump_wavelength: Pump vacuum wavelength in metres
        bracket: Search interval for the root-finding fallback

    Returns:
        Lambda in metres

    Raises:
        NoSolution: bare mismatch is zero or positive
    """
    omega_p = wavelength_to_omega(pump_wavelength)
    bare = degenerate_mismatch(model, omega_p)
    scale = wavevector(model, Polarization.ORDINARY, omega_p)
    if not bare < -1e-12 * scale:
        raise NoSolution(bare)

    period = TWO_PI / (-bare)
    residual = bare + TWO_PI / period
    if abs(residual) > 1e-12 * abs(bare):
        # Only reachable with noisy tabulated data
        logger.warning(f"closed-form poling period left residual {residual:.3e}; refining by bisection")
        period = brentq(lambda p: bare + TWO_PI / p, bracket[0], bracket[1], xtol=1e-18, maxiter=200)

    if not bracket[0] <= period <= bracket[1]:
        logger.warning(
            f"poling period {period * 1e6:.3f} um lies outside [{bracket[0] * 1e6:.0f}, {bracket[1] * 1e6:.0f}] um"
        )
    logger.debug(f"{model.name}: poling period {period * 1e6:.4f} um at {pump_wavelength * 1e9:.1f} nm")
    return period
