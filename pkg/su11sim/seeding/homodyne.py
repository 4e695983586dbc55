"""Homodyne detection of a coherently seeded signal arm.

Two local-oscillator shapes are supported: the first Schmidt mode and a
plane wave at the degenerate frequency. For the plane wave the mode weights
at the centre node enter as |u_k(w_p/2)|^2 times the centre bin width.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from su11sim.errors import InvalidParameter, ZeroPhotons
from su11sim.observables.sensitivity import DERIVATIVE_NOISE, ObservableSeries, assemble_series
from su11sim.observables.vacuum import Eigenvalues, mode_gains
from su11sim.schmidt.decomposition import SchmidtDecomposition
from su11sim.seeding.direct import first_mode_indices

logger = logging.getLogger(__name__)

# below this |cos(theta_a)| the quadrature mean is exactly zero
COS_SNAP = 1e-15


def _cos_theta(theta_a: float) -> float:
    value = math.cos(theta_a)
    return 0.0 if abs(value) < COS_SNAP else value


def first_mode_moments(
    source: Eigenvalues,
    gain: float,
    alpha: float,
    theta_a: float,
    beta_lo: float,
    first: int = 0,
) -> Tuple[float, float]:
    """<H_d> = 2 a |b| cos(theta) cosh(gamma_1); var = |b|^2 cosh(2 gamma_1)."""
    gammas = mode_gains(source, gain)
    if not 0 <= first < gammas.size:
        raise InvalidParameter(f"first-mode index {first} outside {gammas.size} retained modes")
    g = gammas[first]
    mean = 2.0 * alpha * beta_lo * _cos_theta(theta_a) * math.cosh(g)
    variance = beta_lo**2 * math.cosh(2.0 * g)
    return mean, variance


def first_mode_snl(single: Eigenvalues, g1: float, alpha: float) -> float:
    """1/sqrt(a^2 cosh^2(G_1 sqrt(eta_1)) + sinh^2(G_1 sqrt(eta_1)))."""
    g = mode_gains(single, g1)[0]
    photons = alpha**2 * math.cosh(g) ** 2 + math.sinh(g) ** 2
    if not photons > 0:
        raise ZeroPhotons()
    return 1.0 / math.sqrt(photons)


def plane_wave_moments(
    source: Eigenvalues,
    gain: float,
    center_density: np.ndarray,
    alpha: float,
    theta_a: float,
    beta_lo: float,
) -> Tuple[float, float]:
    """Plane-wave local oscillator at the degenerate frequency.

    <H_d> = 2 a |b| cos(theta) (1 + sum_k p_k (cosh(gamma_k) - 1));
    var = |b|^2 (1 + 2 sum_k p_k sinh^2(gamma_k)), with p_k the centre-bin
    weight of mode k.
    """
    gammas = mode_gains(source, gain)
    p = np.asarray(center_density, dtype=float)
    if p.shape != gammas.shape:
        raise InvalidParameter("one centre weight per retained mode is required")
    mean = 2.0 * alpha * beta_lo * _cos_theta(theta_a) * (1.0 + float(np.dot(p, np.cosh(gammas) - 1.0)))
    variance = beta_lo**2 * (1.0 + 2.0 * float(np.dot(p, np.sinh(gammas) ** 2)))
    return mean, variance


def plane_wave_photons(single: Eigenvalues, g1: float, center_density: np.ndarray, alpha: float) -> float:
    """Interfering photons behind one section for a plane-wave seed."""
    gammas = mode_gains(single, g1)
    q = np.asarray(center_density, dtype=float)
    excess = float(np.dot(q, np.cosh(gammas) - 1.0))
    return (
        alpha**2
        + float(np.dot(q, np.sinh(gammas) ** 2))
        + alpha**2 * excess**2
        + 2.0 * alpha**2 * excess
    )


def plane_wave_snl(single: Eigenvalues, g1: float, center_density: np.ndarray, alpha: float) -> float:
    photons = plane_wave_photons(single, g1, center_density, alpha)
    if not photons > 0:
        raise ZeroPhotons()
    return 1.0 / math.sqrt(photons)


def center_density(dec: SchmidtDecomposition) -> np.ndarray:
    """|u_k(w_p/2)|^2 times the centre bin width for every retained mode."""
    index = dec.grid.center_index
    if index is None:
        index = int(np.argmin(np.abs(dec.grid.signal - dec.grid.center)))
        logger.warning(f"Even grid has no centre node; using nearest node {index}")
    return dec.modes.point_density(index)


def homodyne_first_mode(
    decs: Sequence[Eigenvalues],
    gains: Sequence[float],
    phis: Sequence[float],
    single: Eigenvalues,
    g1: float,
    alpha: float,
    theta_a: float = 0.0,
    beta_lo: float = 1.0,
    first: Optional[Sequence[int]] = None,
    derivative_noise: float = DERIVATIVE_NOISE,
) -> ObservableSeries:
    """Homodyne sensitivity with the local oscillator in the tracked first mode."""
    indices = first_mode_indices(decs, phis, first)
    moments = [
        first_mode_moments(dec, g, alpha, theta_a, beta_lo, k) for dec, g, k in zip(decs, gains, indices)
    ]
    means, variances = zip(*moments) if moments else ((), ())
    return assemble_series(
        phis,
        means,
        variances,
        first_mode_snl(single, g1, alpha),
        derivative_noise,
        tag={"seed": "coherent_first_mode", "detection": "homodyne", "theta_a": theta_a},
    )


def homodyne_plane_wave(
    decs: Sequence[Eigenvalues],
    gains: Sequence[float],
    phis: Sequence[float],
    single: Eigenvalues,
    g1: float,
    alpha: float,
    theta_a: float = 0.0,
    beta_lo: float = 1.0,
    densities: Optional[Sequence[np.ndarray]] = None,
    single_density: Optional[np.ndarray] = None,
    derivative_noise: float = DERIVATIVE_NOISE,
) -> ObservableSeries:
    """Homodyne sensitivity for a plane-wave seed and local oscillator.

    Centre-bin weights are read from the decompositions unless ``densities``
    and ``single_density`` are given (bare eigenvalue arrays need them).
    """
    if densities is None:
        densities = [center_density(dec) for dec in decs]
    if single_density is None:
        single_density = center_density(single)
    moments = [
        plane_wave_moments(dec, g, p, alpha, theta_a, beta_lo) for dec, g, p in zip(decs, gains, densities)
    ]
    means, variances = zip(*moments) if moments else ((), ())
    return assemble_series(
        phis,
        means,
        variances,
        plane_wave_snl(single, g1, single_density, alpha),
        derivative_noise,
        tag={"seed": "coherent_plane_wave", "detection": "homodyne", "theta_a": theta_a},
    )
