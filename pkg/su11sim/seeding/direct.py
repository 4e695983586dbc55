"""Direct photon counting with a seeded first Schmidt mode."""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from su11sim.errors import InvalidParameter, ZeroPhotons
from su11sim.observables.sensitivity import DERIVATIVE_NOISE, ObservableSeries, assemble_series
from su11sim.observables.vacuum import Eigenvalues, mode_gains
from su11sim.schmidt.decomposition import SchmidtDecomposition
from su11sim.schmidt.tracking import TRACKED, track_first_mode

logger = logging.getLogger(__name__)


def single_photon_moments(source: Eigenvalues, gain: float, first: int = 0) -> Tuple[float, float]:
    """Mean and variance with one photon in mode ``first``.

    N = sum sinh^2(gamma_k) + 1 + sinh^2(gamma_1);
    var = sum sinh^2 cosh^2 (gamma_k) + sinh^2 cosh^2 (gamma_1).
    """
    gammas = mode_gains(source, gain)
    _check_first(first, gammas)
    s2 = np.sinh(gammas) ** 2
    c2 = np.cosh(gammas) ** 2
    mean = float(np.sum(s2)) + 1.0 + s2[first]
    variance = float(np.sum(s2 * c2)) + s2[first] * c2[first]
    return mean, variance


def single_photon_snl(single: Eigenvalues, g1: float) -> float:
    """1/sqrt(1 + sinh^2(G_1 sqrt(eta_1)) + sum_k sinh^2(G_1 sqrt(eta_k))); 1 at G_1 = 0."""
    s2 = np.sinh(mode_gains(single, g1)) ** 2
    return 1.0 / math.sqrt(1.0 + s2[0] + float(np.sum(s2)))


def coherent_moments(source: Eigenvalues, gain: float, alpha2: float, first: int = 0) -> Tuple[float, float]:
    """Mean and variance with a real coherent amplitude in mode ``first``.

    N = sum sinh^2(gamma_k) + a^2 + a^2 sinh^2(gamma_1);
    var = sum sinh^2 cosh^2 (gamma_k) + a^2 cosh^2(gamma_1) cosh(2 gamma_1).
    """
    if alpha2 < 0:
        raise InvalidParameter(f"|alpha|^2 must be >= 0, got {alpha2}")
    gammas = mode_gains(source, gain)
    _check_first(first, gammas)
    s2 = np.sinh(gammas) ** 2
    c2 = np.cosh(gammas) ** 2
    g1 = gammas[first]
    mean = float(np.sum(s2)) + alpha2 + alpha2 * s2[first]
    variance = float(np.sum(s2 * c2)) + alpha2 * c2[first] * math.cosh(2.0 * g1)
    return mean, variance


def coherent_snl(single: Eigenvalues, g1: float, alpha2: float) -> float:
    """1/sqrt(a^2 cosh^2(G_1 sqrt(eta_1)) + sum_k sinh^2(G_1 sqrt(eta_k)))."""
    gammas = mode_gains(single, g1)
    photons = alpha2 * math.cosh(gammas[0]) ** 2 + float(np.sum(np.sinh(gammas) ** 2))
    if not photons > 0:
        raise ZeroPhotons()
    return 1.0 / math.sqrt(photons)


def _check_first(first: int, gammas: np.ndarray) -> None:
    if not 0 <= first < gammas.size:
        raise InvalidParameter(f"first-mode index {first} outside {gammas.size} retained modes")


def first_mode_indices(
    decs: Sequence[Eigenvalues],
    phis: Sequence[float],
    first: Optional[Sequence[int]] = None,
    method: str = TRACKED,
    threshold: float = 0.5,
) -> Sequence[int]:
    """Seeded-mode index per phase: given, tracked from the modes, or 0."""
    if first is not None:
        return list(first)
    if decs and all(isinstance(dec, SchmidtDecomposition) for dec in decs):
        return track_first_mode([dec.modes for dec in decs], phis, threshold, method)
    return [0] * len(decs)


def seeded_direct_single_photon(
    decs: Sequence[Eigenvalues],
    gains: Sequence[float],
    phis: Sequence[float],
    single: Eigenvalues,
    g1: float,
    first: Optional[Sequence[int]] = None,
    derivative_noise: float = DERIVATIVE_NOISE,
) -> ObservableSeries:
    """Single photon in the tracked first Schmidt mode, direct detection.

    Raises:
        ModeTrackingLost: the first mode cannot be followed across the sweep
    """
    indices = first_mode_indices(decs, phis, first)
    moments = [single_photon_moments(dec, g, k) for dec, g, k in zip(decs, gains, indices)]
    means, variances = zip(*moments) if moments else ((), ())
    return assemble_series(
        phis,
        means,
        variances,
        single_photon_snl(single, g1),
        derivative_noise,
        tag={"seed": "single_photon_first_mode", "detection": "direct"},
    )


def seeded_direct_coherent(
    decs: Sequence[Eigenvalues],
    gains: Sequence[float],
    phis: Sequence[float],
    single: Eigenvalues,
    g1: float,
    alpha2: float = 1e6,
    first: Optional[Sequence[int]] = None,
    derivative_noise: float = DERIVATIVE_NOISE,
) -> ObservableSeries:
    """Coherent state in the tracked first Schmidt mode, direct detection."""
    indices = first_mode_indices(decs, phis, first)
    moments = [coherent_moments(dec, g, alpha2, k) for dec, g, k in zip(decs, gains, indices)]
    means, variances = zip(*moments) if moments else ((), ())
    return assemble_series(
        phis,
        means,
        variances,
        coherent_snl(single, g1, alpha2),
        derivative_noise,
        tag={"seed": "coherent_first_mode", "detection": "direct", "alpha2": alpha2},
    )