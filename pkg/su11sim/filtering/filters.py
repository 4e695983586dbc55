"""Rectangular band-pass filtering of the detected signal arm.

Band integrals use the linear interpolant between grid nodes, so a band edge
falling inside a cell contributes the exact fractional part of that cell.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from su11sim.errors import BandOutsideGrid, InvalidParameter, ZeroPhotons
from su11sim.jsa.grid import FrequencyGrid
from su11sim.observables.sensitivity import DERIVATIVE_NOISE, ObservableSeries, assemble_series
from su11sim.observables.vacuum import mode_gains, truncation_bound
from su11sim.schmidt.decomposition import ModeBasis, SchmidtDecomposition

logger = logging.getLogger(__name__)

# half-width of the band that keeps only the central JSI lobe
CENTRAL_LOBE_HALF_WIDTH = 2.855e12

HERMITIAN_TOLERANCE = 1e-10


class FilterShape(str, Enum):
    RECT_BANDPASS = "rect_bandpass"


@dataclass(frozen=True)
class FilterSpec:
    center: float
    half_width: float
    shape: FilterShape = FilterShape.RECT_BANDPASS

    def __post_init__(self):
        object.__setattr__(self, "shape", FilterShape(self.shape))
        if not self.half_width > 0:
            raise InvalidParameter(f"filter half-width must be > 0, got {self.half_width}")

    @property
    def low(self) -> float:
        return self.center - self.half_width

    @property
    def high(self) -> float:
        return self.center + self.half_width


def band_weights(axis: np.ndarray, low: float, high: float) -> np.ndarray:
    """Quadrature weights of the linear interpolant restricted to [low, high].

    Over the full axis they equal the trapezoid weights; an empty band gives
    zeros.

    Raises:
        BandOutsideGrid: the band extends past either end of ``axis``
    """
    axis = np.asarray(axis, dtype=float)
    span = axis[-1] - axis[0]
    slack = 1e-12 * span
    if low < axis[0] - slack or high > axis[-1] + slack:
        raise BandOutsideGrid(low, high, float(axis[0]), float(axis[-1]))
    low, high = max(low, axis[0]), min(high, axis[-1])
    weights = np.zeros(axis.size)
    if high <= low:
        return weights

    left, right = axis[:-1], axis[1:]
    width = right - left
    a = np.clip(low, left, right)
    b = np.clip(high, left, right)
    # integral of each hat function's falling / rising half over [a, b]
    falling = ((right - a) ** 2 - (right - b) ** 2) / (2.0 * width)
    rising = ((b - left) ** 2 - (a - left) ** 2) / (2.0 * width)
    weights[:-1] += falling
    weights[1:] += rising
    return weights


def filter_weights(grid: FrequencyGrid, spec: FilterSpec) -> np.ndarray:
    return band_weights(grid.signal, spec.low, spec.high)


@dataclass(frozen=True, eq=False)
class BandProjection:
    """Band integrals of the retained signal modes.

    ``mass[k]`` is the in-band norm of u_k; ``cross`` holds |M_kk'|^2 as a
    full matrix, or only its diagonal when modes never overlap.
    """

    mass: np.ndarray
    cross: np.ndarray

    @property
    def is_diagonal(self) -> bool:
        return self.cross.ndim == 1

    def mean(self, occupations: np.ndarray) -> float:
        """sum_k sinh^2(gamma_k) * mass_k."""
        return float(np.dot(occupations, self.mass))

    def variance(self, occupations: np.ndarray) -> float:
        """Filtered mean plus sum_kk' |M_kk'|^2 sinh^2(gamma_k) sinh^2(gamma_k')."""
        if self.is_diagonal:
            cross_term = float(np.dot(self.cross, occupations**2))
        else:
            cross_term = float(occupations @ self.cross @ occupations)
        return self.mean(occupations) + cross_term


def project_band(modes: ModeBasis, weights: np.ndarray) -> BandProjection:
    """Band mass and cross-overlap moduli of ``modes`` under ``weights``."""
    gram = modes.band_gram(weights)
    if gram.ndim == 1:
        mass = np.asarray(gram, dtype=float)
        return BandProjection(mass=mass, cross=mass**2)

    # M is Hermitian, so M * M^T equals |M|^2 up to rounding
    product = gram * gram.T
    scale = float(np.max(np.abs(product))) if product.size else 0.0
    residue = float(np.max(np.abs(product.imag))) if product.size else 0.0
    if scale > 0 and residue > HERMITIAN_TOLERANCE * scale:
        logger.warning(f"Band overlap matrix not Hermitian: imaginary residue {residue:.3e}")
    return BandProjection(mass=np.real(np.diag(gram)).copy(), cross=product.real.copy())


def _occupations(dec: SchmidtDecomposition, gain: float) -> np.ndarray:
    return np.sinh(mode_gains(dec.eigenvalues, gain)) ** 2


def filtered_mean(dec: SchmidtDecomposition, gain: float, spec: FilterSpec) -> float:
    """In-band mean signal photon number."""
    projection = project_band(dec.modes, filter_weights(dec.grid, spec))
    return projection.mean(_occupations(dec, gain))


def filtered_variance(dec: SchmidtDecomposition, gain: float, spec: FilterSpec) -> float:
    """In-band photon-number variance including the cross-mode term."""
    projection = project_band(dec.modes, filter_weights(dec.grid, spec))
    return projection.variance(_occupations(dec, gain))


def filtered_snl_from_mass(eigenvalues: np.ndarray, mass: np.ndarray, g1: float) -> float:
    photons = float(np.dot(np.sinh(mode_gains(eigenvalues, g1)) ** 2, mass))
    if not photons > 0:
        raise ZeroPhotons("no reference photons inside the filter band")
    return 1.0 / math.sqrt(photons)


def filtered_snl(dec_single: SchmidtDecomposition, g1: float, spec: FilterSpec) -> float:
    """1/sqrt(sum_k sinh^2(G_1 sqrt(eta_k)) * in-band mass of the single-section modes).

    Raises:
        ZeroPhotons: the band holds no reference photons
    """
    if g1 == 0:
        raise ZeroPhotons()
    mass = dec_single.modes.band_mass(filter_weights(dec_single.grid, spec))
    return filtered_snl_from_mass(dec_single.eigenvalues, mass, g1)


def filtered_error_budget(dec: SchmidtDecomposition, gain: float) -> float:
    """Bound on the in-band photons carried by the truncated tail."""
    return truncation_bound(dec, gain)


def resolve_filter(value: Union[str, float, None], center: float) -> Union[FilterSpec, None]:
    """Filter from a CLI value: ``central-lobe``, ``none`` or a half-width in rad/s."""
    if value is None:
        return None
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("none", "off", ""):
            return None
        if text == "central-lobe":
            return FilterSpec(center=center, half_width=CENTRAL_LOBE_HALF_WIDTH)
        try:
            value = float(text)
        except ValueError as e:
            raise InvalidParameter(f"unknown filter '{value}'") from e
    return FilterSpec(center=center, half_width=float(value))


def filtered_sensitivity_sweep(
    decs: Sequence[SchmidtDecomposition],
    gains: Sequence[float],
    dec_single: SchmidtDecomposition,
    g1: float,
    spec: FilterSpec,
    derivative_noise: float = DERIVATIVE_NOISE,
) -> ObservableSeries:
    """Normalized filtered sensitivity along a phase sweep.

    Args:
        decs: Decompositions ordered by phase
        gains: Effective gain G(phi) for each decomposition
        dec_single: Single-section decomposition for the reference arm
        g1: Single-section gain
        spec: Band-pass filter
        derivative_noise: Relative rounding noise of the means; slopes within it are stationary
    """
    phis = [dec.phi for dec in decs]
    means, variances = [], []
    for dec, gain in zip(decs, gains):
        projection = project_band(dec.modes, filter_weights(dec.grid, spec))
        occupations = _occupations(dec, gain)
        means.append(projection.mean(occupations))
        variances.append(projection.variance(occupations))
    snl = filtered_snl(dec_single, g1, spec)
    return assemble_series(
        phis,
        means,
        variances,
        snl,
        derivative_noise,
        tag={"filter_half_width": spec.half_width},
    )
