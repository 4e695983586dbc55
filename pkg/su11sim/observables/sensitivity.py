"""Phase derivatives, phase sensitivity and shot-noise normalization over a sweep."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar

from su11sim.errors import AllInfinite, BoundaryPoint, InvalidParameter, ZeroPhotons
from su11sim.observables.vacuum import Eigenvalues, mode_gains
from su11sim.schmidt.decomposition import SchmidtDecomposition
from su11sim.schmidt.tracking import match_modes

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# relative rounding noise of a computed mean photon number
DERIVATIVE_NOISE = 1e-12


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    """Observables along a phase sweep at one gain.

    ``N`` holds the detected mean signal: the photon number for direct
    detection, <H_d> for homodyne detection.
    """

    phis: np.ndarray
    N: np.ndarray
    varN: np.ndarray
    dNdphi: np.ndarray
    dphi: np.ndarray
    dphi_snl: np.ndarray
    normalized: np.ndarray
    derivative_zero: np.ndarray
    tag: Dict[str, Any] = field(default_factory=dict)

    def minimum(self) -> Tuple[float, float]:
        return find_min_sensitivity(self.phis, self.normalized)

    def bands(self, level: float = 1.0) -> List[Tuple[float, float]]:
        return supersensitivity_bands(self.phis, self.normalized, level)


def is_full_period(phis: Sequence[float]) -> bool:
    """True for a uniform grid covering one 2*pi period without its endpoint."""
    phis = np.asarray(phis, dtype=float)
    if phis.size < 3:
        return False
    steps = np.diff(phis)
    h = steps[0]
    if not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        return False
    return abs(phis[-1] + h - phis[0] - TWO_PI) <= 1e-9 * TWO_PI


def dN_dphi(values: Sequence[float], phis: Sequence[float], index: int) -> float:
    """Central difference of ``values`` at ``index``; wraps on full-period grids.

    Raises:
        BoundaryPoint: ``index`` is the first or last point of an open grid
    """
    values = np.asarray(values, dtype=float)
    phis = np.asarray(phis, dtype=float)
    n = values.size
    if not 0 <= index < n:
        raise InvalidParameter(f"index {index} outside sweep of {n} points")
    if is_full_period(phis):
        h = phis[1] - phis[0]
        return float((values[(index + 1) % n] - values[(index - 1) % n]) / (2.0 * h))
    if index == 0 or index == n - 1:
        raise BoundaryPoint(index)
    return float((values[index + 1] - values[index - 1]) / (phis[index + 1] - phis[index - 1]))


def derivative_sweep(values: Sequence[float], phis: Sequence[float]) -> np.ndarray:
    """dN/dphi at every sweep point; NaN at the ends of an open grid."""
    values = np.asarray(values, dtype=float)
    phis = np.asarray(phis, dtype=float)
    if is_full_period(phis):
        h = phis[1] - phis[0]
        return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * h)
    out = np.full(values.size, np.nan)
    out[1:-1] = (values[2:] - values[:-2]) / (phis[2:] - phis[:-2])
    return out


def richardson_check(values: Sequence[float], phis: Sequence[float], index: int) -> Dict[str, float]:
    """Compare the central difference at step h with step 2h.

    Returns:
        Dict with 'd_h', 'd_2h', 'extrapolated' ((4 d_h - d_2h) / 3) and
        'relative_change' between the two steps
    """
    values = np.asarray(values, dtype=float)
    phis = np.asarray(phis, dtype=float)
    n = values.size
    if is_full_period(phis):
        h = phis[1] - phis[0]
        d_h = (values[(index + 1) % n] - values[(index - 1) % n]) / (2.0 * h)
        d_2h = (values[(index + 2) % n] - values[(index - 2) % n]) / (4.0 * h)
    else:
        if index < 2 or index > n - 3:
            raise BoundaryPoint(index)
        d_h = (values[index + 1] - values[index - 1]) / (phis[index + 1] - phis[index - 1])
        d_2h = (values[index + 2] - values[index - 2]) / (phis[index + 2] - phis[index - 2])
    scale = max(abs(d_h), abs(d_2h))
    return {
        "d_h": float(d_h),
        "d_2h": float(d_2h),
        "extrapolated": float((4.0 * d_h - d_2h) / 3.0),
        "relative_change": float(abs(d_h - d_2h) / scale) if scale > 0 else 0.0,
    }


def phase_sensitivity(variance: float, derivative: float, zero_tol: float = 0.0) -> Tuple[float, bool]:
    """sqrt(var) / |dN/dphi|, or (+inf, True) when |dN/dphi| <= zero_tol."""
    if not math.isfinite(derivative):
        return math.nan, False
    if abs(derivative) <= zero_tol:
        return math.inf, True
    return math.sqrt(max(variance, 0.0)) / abs(derivative), False


def snl_vacuum(single: Eigenvalues, g1: float) -> float:
    """Shot-noise limit 1/sqrt(sum_k sinh^2(G_1 sqrt(eta_k))) of one section.

    Raises:
        ZeroPhotons: G_1 = 0 so the reference arm is empty
    """
    if g1 == 0:
        raise ZeroPhotons()
    photons = float(np.sum(np.sinh(mode_gains(single, g1)) ** 2))
    if not photons > 0:
        raise ZeroPhotons()
    return 1.0 / math.sqrt(photons)


def stationary_tolerance(values: Sequence[float], phis: Sequence[float], noise: float = DERIVATIVE_NOISE) -> np.ndarray:
    """Largest central difference that relative noise ``noise`` in the values can fake.

    noise * (|N[i+1]| + |N[i-1]|) / (phi[i+1] - phi[i-1]), with the same
    wrapping and NaN ends as ``derivative_sweep``.
    """
    values = np.abs(np.asarray(values, dtype=float))
    phis = np.asarray(phis, dtype=float)
    if is_full_period(phis):
        h = phis[1] - phis[0]
        return noise * (np.roll(values, -1) + np.roll(values, 1)) / (2.0 * h)
    out = np.full(values.size, np.nan)
    out[1:-1] = noise * (values[2:] + values[:-2]) / (phis[2:] - phis[:-2])
    return out


def assemble_series(
    phis: Sequence[float],
    means: Sequence[float],
    variances: Sequence[float],
    snl: Union[float, Sequence[float]],
    derivative_noise: float = DERIVATIVE_NOISE,
    tag: Optional[Dict[str, Any]] = None,
) -> ObservableSeries:
    """Turn per-phase means and variances into a sensitivity curve.

    A derivative counts as zero, giving +inf, only when it is within the
    rounding noise of the neighbouring means (see ``stationary_tolerance``).
    Steep but finite regions are never cut off.
    """
    phis = np.asarray(phis, dtype=float)
    means = np.asarray(means, dtype=float)
    variances = np.asarray(variances, dtype=float)
    derivative = derivative_sweep(means, phis)
    tolerance = stationary_tolerance(means, phis, derivative_noise)

    dphi = np.empty(phis.size)
    flags = np.zeros(phis.size, dtype=bool)
    for i in range(phis.size):
        dphi[i], flags[i] = phase_sensitivity(variances[i], derivative[i], tolerance[i])

    snl_values = np.broadcast_to(np.asarray(snl, dtype=float), phis.shape).copy()
    with np.errstate(invalid="ignore"):
        normalized = dphi / snl_values
    n_zero = int(flags.sum())
    if n_zero:
        logger.debug(f"{n_zero} stationary phase point(s) flagged with infinite sensitivity")
    return ObservableSeries(
        phis=phis,
        N=means,
        varN=variances,
        dNdphi=derivative,
        dphi=dphi,
        dphi_snl=snl_values,
        normalized=normalized,
        derivative_zero=flags,
        tag=dict(tag or {}),
    )


def find_min_sensitivity(phis: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
    """Smallest finite value, refined by golden-section search on a spline.

    The grid minimum (ties go to the smaller phase) is refined only when both
    neighbours are finite and strictly larger.

    Raises:
        AllInfinite: no finite sample
    """
    phis = np.asarray(phis, dtype=float)
    values = np.asarray(values, dtype=float)
    finite = np.isfinite(values)
    if not finite.any():
        raise AllInfinite()
    i = int(np.argmin(np.where(finite, values, np.inf)))
    best_phi, best = float(phis[i]), float(values[i])

    n = values.size
    if i == 0 or i == n - 1 or not (finite[i - 1] and finite[i + 1]):
        return best_phi, best
    if not (values[i - 1] > best and values[i + 1] > best):
        return best_phi, best

    lo, hi = i - 1, i + 1
    while lo > 0 and i - lo < 3 and finite[lo - 1]:
        lo -= 1
    while hi < n - 1 and hi - i < 3 and finite[hi + 1]:
        hi += 1
    spline = CubicSpline(phis[lo : hi + 1], values[lo : hi + 1])

    def objective(x):
        return float(spline(x))

    result = minimize_scalar(objective, bracket=(phis[i - 1], phis[i], phis[i + 1]), method="golden")
    x = float(np.clip(result.x, phis[i - 1], phis[i + 1]))
    refined = objective(x)
    if refined <= best:
        return x, refined
    return best_phi, best


def supersensitivity_bands(phis: Sequence[float], values: Sequence[float], level: float = 1.0) -> List[Tuple[float, float]]:
    """Phase intervals where ``values < level``, edges linearly interpolated.

    A non-finite neighbour pins the edge to the last point below ``level``.
    """
    phis = np.asarray(phis, dtype=float)
    values = np.asarray(values, dtype=float)
    below = np.isfinite(values) & (values < level)
    bands = []
    n = values.size

    def edge(inside: int, outside: int) -> float:
        if not np.isfinite(values[outside]):
            return float(phis[inside])
        t = (level - values[inside]) / (values[outside] - values[inside])
        return float(phis[inside] + t * (phis[outside] - phis[inside]))

    i = 0
    while i < n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and below[j + 1]:
            j += 1
        start = edge(i, i - 1) if i > 0 else float(phis[i])
        stop = edge(j, j + 1) if j < n - 1 else float(phis[j])
        bands.append((start, stop))
        i = j + 1
    return bands


def band_width(bands: Sequence[Tuple[float, float]]) -> float:
    return float(sum(stop - start for start, stop in bands))


def visibility(values: Sequence[float]) -> float:
    """(max - min) / (max + min) over the finite samples."""
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    if values.size == 0:
        return 0.0
    top, bottom = float(values.max()), float(values.min())
    if top + bottom == 0:
        return 0.0
    return (top - bottom) / (top + bottom)


def analytic_dN_dphi(
    previous: SchmidtDecomposition,
    current: SchmidtDecomposition,
    following: SchmidtDecomposition,
    gains: Tuple[float, float, float],
    step: float,
) -> float:
    """sum_k sinh(2 gamma_k) d(gamma_k)/dphi with gamma_k followed across three phases.

    Modes of the outer decompositions are matched to ``current`` by overlap,
    so eigenvalue reordering between phases does not break the derivative.
    """
    g_prev, g_cur, g_next = gains
    before = match_modes(current.modes, previous.modes)
    after = match_modes(current.modes, following.modes)
    keep = (before >= 0) & (after >= 0)
    gamma_cur = mode_gains(current.eigenvalues, g_cur)[keep]
    gamma_prev = mode_gains(previous.eigenvalues, g_prev)[before[keep]]
    gamma_next = mode_gains(following.eigenvalues, g_next)[after[keep]]
    return float(np.sum(np.sinh(2.0 * gamma_cur) * (gamma_next - gamma_prev) / (2.0 * step)))
