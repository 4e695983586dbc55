"""Photon-number moments for a vacuum-seeded interferometer."""

import math
from typing import Union

import numpy as np

from su11sim.errors import InvalidParameter
from su11sim.schmidt.decomposition import SchmidtDecomposition

Eigenvalues = Union[SchmidtDecomposition, np.ndarray, list]


def eigenvalues_of(source: Eigenvalues) -> np.ndarray:
    """Eigenvalue array from a decomposition or anything array-like."""
    if isinstance(source, SchmidtDecomposition):
        return source.eigenvalues
    return np.asarray(source, dtype=float)


def mode_gains(source: Eigenvalues, gain: float) -> np.ndarray:
    """gamma_k = G * sqrt(lambda_k)."""
    if gain < 0:
        raise InvalidParameter(f"effective gain must be >= 0, got {gain}")
    return gain * np.sqrt(np.clip(eigenvalues_of(source), 0.0, None))


def mean_photons_vacuum(source: Eigenvalues, gain: float) -> float:
    """<N> = sum_k sinh^2(G sqrt(lambda_k))."""
    return float(np.sum(np.sinh(mode_gains(source, gain)) ** 2))


def variance_vacuum(source: Eigenvalues, gain: float) -> float:
    """<dN^2> = (1/4) sum_k sinh^2(2 G sqrt(lambda_k))."""
    return float(0.25 * np.sum(np.sinh(2.0 * mode_gains(source, gain)) ** 2))


def truncation_bound(dec: SchmidtDecomposition, gain: float) -> float:
    """Photon-number error budget of the discarded tail: tail * sinh^2(G sqrt(lambda_Kmax)).

    Accepts anything carrying ``eigenvalues`` and ``tail_mass``.
    """
    if dec.tail_mass <= 0 or dec.eigenvalues.size == 0:
        return 0.0
    last = math.sqrt(max(float(dec.eigenvalues[-1]), 0.0))
    return dec.tail_mass * math.sinh(gain * last) ** 2


def photon_rate(mean_photons: float, spacing: float) -> float:
    """Photons per second for a CW sweep whose grid spacing is the mode resolution."""
    return mean_photons * spacing / (2.0 * math.pi)
