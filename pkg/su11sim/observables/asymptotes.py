"""Closed-form envelopes of the normalized phase sensitivity."""

import numpy as np

from su11sim.errors import InvalidParameter

TWO_PI = 2.0 * np.pi


def _check_phase(phi):
    phi = np.asarray(phi, dtype=float)
    if np.any((phi <= 0) | (phi >= TWO_PI)):
        raise InvalidParameter("asymptotes are defined for phi in (0, 2*pi)")
    return phi


def _check_gain(gamma):
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma <= 0):
        raise InvalidParameter("gain parameter must be > 0")
    return gamma


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def asymptote_low_gain(phi):
    """1 / (2 sin(phi/2)); 0.5 at phi = pi."""
    phi = _check_phase(phi)
    return _scalar(1.0 / (2.0 * np.sin(0.5 * phi)))


def asymptote_high_gain(gamma, phi):
    """sinh(gamma/2) / (gamma sin(phi/2)); tends to the low-gain form as gamma -> 0."""
    gamma = _check_gain(gamma)
    phi = _check_phase(phi)
    return _scalar(np.sinh(0.5 * gamma) / (gamma * np.sin(0.5 * phi)))


def high_gain_floor(gamma):
    """sinh(gamma/2) / gamma, the high-gain envelope at phi = pi."""
    gamma = _check_gain(gamma)
    return _scalar(np.sinh(0.5 * gamma) / gamma)


def asymptote_coherent_direct(gamma, phi):
    """Coherent-seed direct detection in the |alpha|^2 >> sum sinh^2 regime.

    sqrt((1 + coth^2(gamma_1)) cosh^2(gamma/2)) / (gamma sin(phi/2)) with
    gamma_1 = gamma |cos(phi/2)|; diverges at phi = pi.

    The prefactor under the root is 1. Writing the closed form with 4
    there puts the envelope a factor 2 above the simulated coherent
    curves, whose slope is a^2 sinh(2 gamma_1) d(gamma_1)/d(phi).
    """
    gamma = _check_gain(gamma)
    phi = _check_phase(phi)
    gamma_1 = gamma * np.abs(np.cos(0.5 * phi))
    with np.errstate(divide="ignore", invalid="ignore"):
        coth2 = np.where(gamma_1 > 0, 1.0 / np.tanh(np.where(gamma_1 > 0, gamma_1, 1.0)) ** 2, np.inf)
        value = np.sqrt((1.0 + coth2) * np.cosh(0.5 * gamma) ** 2) / (gamma * np.sin(0.5 * phi))
    return _scalar(value)
