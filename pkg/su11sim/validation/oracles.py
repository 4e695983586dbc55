"""Independent reference models for the Schmidt-mode photon statistics.

Two brute-force Fock-space simulators reproduce the closed-form moments
sum sinh^2(gamma_k) and sum sinh^2 cosh^2(gamma_k) without using them: one
squeezes each Schmidt pair separately, the other exponentiates the full
bin-basis generator of a small sampled kernel. The double-Gaussian kernel
has an exact geometric Schmidt spectrum and checks the decomposition itself.
"""

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply

from su11sim.errors import InvalidParameter
from su11sim.jsa.builder import JointSpectralAmplitude, jsa_from_samples
from su11sim.jsa.grid import FrequencyGrid

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 12
MAX_PAIRS = 3
MAX_KERNEL_MODES = 4


def annihilation(cutoff: int) -> np.ndarray:
    if cutoff < 2:
        raise InvalidParameter(f"Fock cutoff must be >= 2, got {cutoff}")
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1)


def two_mode_squeezer(gamma: float, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """exp(gamma (a^dag b^dag - a b)) on the truncated two-mode Fock space."""
    a = annihilation(cutoff)
    pair = np.kron(a.T, a.T)
    return expm(gamma * (pair - pair.T))


def _number_moments(state: np.ndarray, number: np.ndarray) -> Tuple[float, float]:
    weighted = number @ state
    mean = float(np.real(np.vdot(state, weighted)))
    second = float(np.real(np.vdot(weighted, weighted)))
    return mean, second - mean**2


def fock_moments(gammas: Sequence[float], cutoff: int = DEFAULT_CUTOFF) -> Tuple[float, float]:
    """Signal photon-number mean and variance from independent squeezed pairs.

    Each Schmidt pair starts in vacuum and is squeezed by its own gain; the
    pairs are independent, so means and variances add.

    Raises:
        InvalidParameter: more than three pairs requested
    """
    if len(gammas) > MAX_PAIRS:
        raise InvalidParameter(f"Fock oracle handles at most {MAX_PAIRS} Schmidt pairs, got {len(gammas)}")
    a = annihilation(cutoff)
    number = np.kron(a.T @ a, np.eye(cutoff))
    vacuum = np.zeros(cutoff * cutoff)
    vacuum[0] = 1.0
    mean = variance = 0.0
    for gamma in gammas:
        state = two_mode_squeezer(float(gamma), cutoff) @ vacuum
        leak = float(np.abs(state[-1]) ** 2)
        if leak > 1e-12:
            logger.warning(f"Fock cutoff {cutoff} too small for gamma={gamma}: top-state weight {leak:.2e}")
        m, v = _number_moments(state, number)
        mean += m
        variance += v
    return mean, variance


def _embed(op: sparse.spmatrix, position: int, modes: int, cutoff: int) -> sparse.spmatrix:
    factors = [sparse.identity(cutoff, format="csr")] * modes
    factors[position] = op
    result = factors[0]
    for factor in factors[1:]:
        result = sparse.kron(result, factor, format="csr")
    return result


def fock_kernel_moments(kernel: np.ndarray, cutoff: int = DEFAULT_CUTOFF) -> Tuple[float, float]:
    """Signal mean and variance of exp(sum_ij W_ij a_i^dag b_j^dag - h.c.) on vacuum.

    ``kernel`` is the quadrature-weighted amplitude with the gain already
    folded in; its singular values are the mode gains gamma_k.

    Raises:
        InvalidParameter: more than four bin modes in total
    """
    kernel = np.atleast_2d(np.asarray(kernel, dtype=complex))
    m, n = kernel.shape
    modes = m + n
    if modes > MAX_KERNEL_MODES:
        raise InvalidParameter(f"kernel oracle handles at most {MAX_KERNEL_MODES} bin modes, got {modes}")
    a = sparse.csr_matrix(annihilation(cutoff))
    lowering = [_embed(a, p, modes, cutoff) for p in range(modes)]
    creation = [op.T.tocsr() for op in lowering]

    generator = sparse.csr_matrix((cutoff**modes, cutoff**modes), dtype=complex)
    for i in range(m):
        for j in range(n):
            generator = generator + kernel[i, j] * (creation[i] @ creation[m + j])
    generator = generator - generator.conj().T

    vacuum = np.zeros(cutoff**modes, dtype=complex)
    vacuum[0] = 1.0
    state = expm_multiply(generator.tocsc(), vacuum)
    number = creation[0] @ lowering[0]
    for i in range(1, m):
        number = number + creation[i] @ lowering[i]
    return _number_moments(state, number)


def mehler_ratio(tau: float, sigma: float) -> float:
    """Geometric eigenvalue ratio mu = ((1 - tau sigma) / (1 + tau sigma))^2."""
    if not (tau > 0 and sigma > 0):
        raise InvalidParameter("double-Gaussian widths must be > 0")
    s = tau * sigma
    return ((1.0 - s) / (1.0 + s)) ** 2


def mehler_eigenvalues(tau: float, sigma: float, count: int) -> np.ndarray:
    """lambda_k = (1 - mu) mu^k for the double-Gaussian kernel."""
    mu = mehler_ratio(tau, sigma)
    return (1.0 - mu) * mu ** np.arange(count)


def double_gaussian_kernel(grid: FrequencyGrid, tau: float, sigma: float) -> np.ndarray:
    """exp(-tau^2 (x + y)^2 / 4 - (x - y)^2 / (4 sigma^2)) with x, y offsets from the grid centre."""
    x = (grid.signal - grid.center)[:, None]
    y = (grid.idler - grid.center)[None, :]
    return np.exp(-(tau**2) * (x + y) ** 2 / 4.0 - (x - y) ** 2 / (4.0 * sigma**2))


def double_gaussian_jsa(grid: FrequencyGrid, tau: float, sigma: float) -> JointSpectralAmplitude:
    return jsa_from_samples(double_gaussian_kernel(grid, tau, sigma), grid, metadata={"kernel": "double_gaussian"})
