"""Quadrature-weighted Schmidt decomposition of a JSA.

The weighted matrix sqrt(w_s) F sqrt(w_i) is factorized by SVD; singular
vectors are divided by sqrt(w) again so the mode functions are orthonormal
under the grid quadrature. Each pair (u_k, v_k) is gauge fixed: u_k is real
and positive at its largest-modulus node.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
from scipy import linalg

from su11sim.errors import ConvergenceFailure, InvalidParameter
from su11sim.jsa.builder import JointSpectralAmplitude
from su11sim.jsa.grid import FrequencyGrid
from su11sim.phasematch.mismatch import Variant

logger = logging.getLogger(__name__)

DEFAULT_K_MAX = 64
TAIL_WARNING = 1e-3


@dataclass(frozen=True, eq=False)
class DenseModes:
    """Mode functions stored as rows of (K, N) arrays."""

    signal: np.ndarray
    idler: np.ndarray
    w_s: np.ndarray
    w_i: np.ndarray

    @property
    def count(self) -> int:
        return self.signal.shape[0]

    def signal_mode(self, k: int) -> np.ndarray:
        return self.signal[k]

    def signal_matrix(self) -> np.ndarray:
        return self.signal

    def idler_matrix(self) -> np.ndarray:
        return self.idler

    def overlaps(self, vector: np.ndarray) -> np.ndarray:
        """|<vector|u_k>| for every retained signal mode."""
        return np.abs(self.signal @ (np.conj(vector) * self.w_s))

    def point_density(self, index: int) -> np.ndarray:
        """|u_k(w_index)|^2 * w_index: weight of mode k in the bin at ``index``."""
        return np.abs(self.signal[:, index]) ** 2 * self.w_s[index]

    def band_mass(self, band_weights: np.ndarray) -> np.ndarray:
        return (np.abs(self.signal) ** 2) @ band_weights

    def band_gram(self, band_weights: np.ndarray) -> np.ndarray:
        """M[k, k'] = sum_j bw_j conj(u_k[j]) u_k'[j] as a full matrix."""
        return (np.conj(self.signal) * band_weights) @ self.signal.T

    def truncated(self, depth: int) -> "DenseModes":
        return DenseModes(self.signal[:depth], self.idler[:depth], self.w_s, self.w_i)


@dataclass(frozen=True, eq=False)
class BinModes:
    """Modes of the CW reduction: each signal mode is one grid bin.

    u_k = e_{bin_k} / sqrt(w_bin_k); the idler partner sits in the mirrored
    bin and carries the amplitude's phase.
    """

    signal_bins: np.ndarray
    idler_bins: np.ndarray
    idler_phase: np.ndarray
    w_s: np.ndarray
    w_i: np.ndarray

    @property
    def count(self) -> int:
        return self.signal_bins.size

    def signal_mode(self, k: int) -> np.ndarray:
        mode = np.zeros(self.w_s.size, dtype=complex)
        mode[self.signal_bins[k]] = 1.0 / np.sqrt(self.w_s[self.signal_bins[k]])
        return mode

    def signal_matrix(self) -> np.ndarray:
        modes = np.zeros((self.count, self.w_s.size), dtype=complex)
        modes[np.arange(self.count), self.signal_bins] = 1.0 / np.sqrt(self.w_s[self.signal_bins])
        return modes

    def idler_matrix(self) -> np.ndarray:
        modes = np.zeros((self.count, self.w_i.size), dtype=complex)
        modes[np.arange(self.count), self.idler_bins] = self.idler_phase / np.sqrt(self.w_i[self.idler_bins])
        return modes

    def overlaps(self, vector: np.ndarray) -> np.ndarray:
        return np.abs(np.conj(vector[self.signal_bins]) * np.sqrt(self.w_s[self.signal_bins]))

    def point_density(self, index: int) -> np.ndarray:
        return (self.signal_bins == index).astype(float)

    def band_mass(self, band_weights: np.ndarray) -> np.ndarray:
        return band_weights[self.signal_bins] / self.w_s[self.signal_bins]

    def band_gram(self, band_weights: np.ndarray) -> np.ndarray:
        """Diagonal of M only: distinct bins never overlap."""
        return self.band_mass(band_weights)

    def truncated(self, depth: int) -> "BinModes":
        return self


ModeBasis = Union[DenseModes, BinModes]


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    eigenvalues: np.ndarray
    modes: ModeBasis
    grid: FrequencyGrid
    phi: float
    raw_norm: float
    variant: Variant
    k_max: Optional[int]
    tail_mass: float
    reconstruction_error: float
    gain: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    @property
    def retained(self) -> int:
        return self.eigenvalues.size

    @property
    def signal_modes(self) -> np.ndarray:
        return self.modes.signal_matrix()

    @property
    def idler_modes(self) -> np.ndarray:
        return self.modes.idler_matrix()

    def with_gain(self, gain: float) -> "SchmidtDecomposition":
        if gain < 0:
            raise InvalidParameter(f"effective gain must be >= 0, got {gain}")
        return replace(self, gain=float(gain))

    def reconstruct(self) -> np.ndarray:
        """sum_k sqrt(lambda_k) u_k(w_s) v_k(w_i) on the grid."""
        roots = np.sqrt(self.eigenvalues)
        return (self.modes.signal_matrix().T * roots) @ self.modes.idler_matrix()


def _svd(matrix: np.ndarray):
    try:
        return linalg.svd(matrix, full_matrices=False, lapack_driver="gesdd")
    except (linalg.LinAlgError, ValueError):
        logger.warning("gesdd did not converge; retrying with gesvd")
    try:
        return linalg.svd(matrix, full_matrices=False, lapack_driver="gesvd")
    except (linalg.LinAlgError, ValueError) as e:
        raise ConvergenceFailure(f"SVD failed: {e}") from e


def _retain(count: int, k_max: Optional[int]) -> int:
    return count if k_max is None else min(int(k_max), count)


def _warn_tail(tail: float, retained: int, phi: float) -> None:
    if tail > TAIL_WARNING:
        logger.warning(f"Schmidt truncation at K={retained} leaves tail mass {tail:.3e} (phi={phi:.4f})")


def _decompose_dense(jsa: JointSpectralAmplitude, k_max: Optional[int]) -> SchmidtDecomposition:
    grid = jsa.grid
    weighted = jsa.weighted_matrix()
    u, s, vh = _svd(weighted)

    scale = np.linalg.norm(weighted)
    residual = weighted - (u * s) @ vh
    recon = float(np.linalg.norm(residual) / scale) if scale > 0 else 0.0

    eigenvalues = s**2
    retained = _retain(eigenvalues.size, k_max)
    tail = float(np.sum(eigenvalues[retained:]))
    _warn_tail(tail, retained, jsa.phi)

    sqrt_ws = np.sqrt(grid.w_s)
    sqrt_wi = np.sqrt(grid.w_i)
    signal = (u[:, :retained].T / sqrt_ws).astype(complex)
    idler = (vh[:retained, :] / sqrt_wi).astype(complex)

    peaks = np.argmax(np.abs(signal), axis=1)
    phases = signal[np.arange(retained), peaks]
    phases = phases / np.abs(phases)
    signal *= np.conj(phases)[:, None]
    idler *= phases[:, None]

    for array in (signal, idler):
        array.flags.writeable = False

    return SchmidtDecomposition(
        eigenvalues=eigenvalues[:retained],
        modes=DenseModes(signal, idler, grid.w_s, grid.w_i),
        grid=grid,
        phi=jsa.phi,
        raw_norm=jsa.raw_norm,
        variant=jsa.variant,
        k_max=k_max,
        tail_mass=tail,
        reconstruction_error=recon,
    )


def _decompose_antidiagonal(jsa: JointSpectralAmplitude, k_max: Optional[int]) -> SchmidtDecomposition:
    grid = jsa.grid
    profile = jsa.profile
    weights = np.abs(profile) ** 2 * grid.w_s
    order = np.argsort(-weights, kind="stable")
    retained = _retain(order.size, k_max)
    bins = order[:retained]
    tail = float(np.sum(weights[order[retained:]]))
    _warn_tail(tail, retained, jsa.phi)

    amplitude = profile[bins]
    modulus = np.abs(amplitude)
    phase = np.where(modulus > 0, amplitude / np.where(modulus > 0, modulus, 1.0), 1.0 + 0j)

    return SchmidtDecomposition(
        eigenvalues=weights[bins],
        modes=BinModes(
            signal_bins=bins,
            idler_bins=grid.n_s - 1 - bins,
            idler_phase=phase,
            w_s=grid.w_s,
            w_i=grid.w_i,
        ),
        grid=grid,
        phi=jsa.phi,
        raw_norm=jsa.raw_norm,
        variant=jsa.variant,
        k_max=k_max,
        tail_mass=tail,
        reconstruction_error=0.0,
        metadata={"representation": "antidiagonal"},
    )


def schmidt_decompose(jsa: JointSpectralAmplitude, k_max: Optional[int] = DEFAULT_K_MAX) -> SchmidtDecomposition:
    """Schmidt eigenvalues and gauge-fixed modes of a normalized JSA.

    Args:
        jsa: Normalized joint spectral amplitude
        k_max: Retained mode count; ``None`` keeps the full rank

    Returns:
        SchmidtDecomposition with eigenvalues in descending order

    Raises:
        ConvergenceFailure: the SVD did not converge with either LAPACK driver
    """
    if not jsa.normalized:
        raise InvalidParameter("Schmidt decomposition needs a normalized JSA")
    if k_max is not None and k_max < 1:
        raise InvalidParameter(f"k_max must be >= 1, got {k_max}")
    if jsa.is_antidiagonal:
        return _decompose_antidiagonal(jsa, k_max)
    return _decompose_dense(jsa, k_max)
