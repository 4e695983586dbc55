"""Gain calibration and the gain-weighted Schmidt number."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from su11sim.errors import DegenerateJSA, InvalidParameter
from su11sim.schmidt.decomposition import SchmidtDecomposition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GainCalibration:
    """Coupling scale fixed at phi = 0: G(phi) = g0 * raw_norm(phi)."""

    gamma: float
    g0: float

    def gain_at(self, raw_norm: float) -> float:
        return self.g0 * raw_norm

    def gain(self, dec: SchmidtDecomposition) -> float:
        return self.gain_at(dec.raw_norm)


def calibrate_gain(dec0: SchmidtDecomposition, gamma_target: float) -> GainCalibration:
    """Fix g0 so that G(0) * sqrt(lambda_1(0)) equals ``gamma_target``.

    Args:
        dec0: Decomposition of the phi = 0 JSA
        gamma_target: Gain parameter gamma > 0

    Raises:
        DegenerateJSA: the phi = 0 amplitude had zero raw norm
    """
    if not gamma_target > 0:
        raise InvalidParameter(f"gain parameter must be > 0, got {gamma_target}")
    if not dec0.raw_norm > 0:
        raise DegenerateJSA("raw norm at phi = 0 vanishes; gain cannot be calibrated")
    lambda1 = float(dec0.eigenvalues[0])
    if not lambda1 > 0:
        raise DegenerateJSA("leading Schmidt eigenvalue at phi = 0 vanishes")
    g0 = gamma_target / (math.sqrt(lambda1) * dec0.raw_norm)
    logger.debug(f"Calibrated gamma={gamma_target}: g0={g0:.6e}, G(0)={g0 * dec0.raw_norm:.6e}")
    return GainCalibration(gamma=float(gamma_target), g0=g0)


def _log_sinh2(x: np.ndarray) -> np.ndarray:
    # log(sinh^2 x) without overflow: 2x + 2 log((1 - e^{-2x}) / 2)
    return 2.0 * x + 2.0 * np.log(-np.expm1(-2.0 * x)) - 2.0 * math.log(2.0)


def schmidt_number(eigenvalues, gain: float) -> float:
    """K = 1 / sum(Lambda_k^2) with Lambda_k proportional to sinh^2(G sqrt(lambda_k)).

    At G = 0 the weights fall back to lambda_k / sum(lambda), the ordinary
    Schmidt number.
    """
    if gain < 0:
        raise InvalidParameter(f"gain must be >= 0, got {gain}")
    lam = np.asarray(getattr(eigenvalues, "eigenvalues", eigenvalues), dtype=float)
    lam = lam[lam > 0]
    if lam.size == 0:
        return 1.0
    if gain == 0:
        weights = lam / lam.sum()
    else:
        logs = _log_sinh2(gain * np.sqrt(lam))
        weights = np.exp(logs - logsumexp(logs))
    return float(1.0 / np.sum(weights**2))
