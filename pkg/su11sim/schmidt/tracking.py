"""Follow Schmidt modes continuously across a phase sweep."""

import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from su11sim.errors import InvalidParameter, ModeTrackingLost
from su11sim.schmidt.decomposition import ModeBasis

logger = logging.getLogger(__name__)

TRACKED = "tracked"
ARGMAX = "argmax"


def track_first_mode(
    bases: Sequence[Optional[ModeBasis]],
    phis: Sequence[float],
    threshold: float = 0.5,
    method: str = TRACKED,
) -> List[int]:
    """Index of the "first" Schmidt mode at every sweep point.

    With ``method="tracked"`` the mode is followed from the first point by
    maximal |<u_prev|u_j>|; ``"argmax"`` always picks index 0 (largest
    instantaneous eigenvalue). A ``None`` basis marks a point without modes
    (vanishing amplitude); it gets index 0 and does not move the reference.

    Raises:
        ModeTrackingLost: best overlap with the previous mode drops below
            ``threshold``
    """
    if len(bases) != len(phis):
        raise InvalidParameter("one mode basis per phase is required")
    if method == ARGMAX:
        return [0] * len(bases)
    if method != TRACKED:
        raise InvalidParameter(f"unknown first-mode method '{method}'")
    if not bases:
        return []

    indices = []
    previous = None
    for basis, phi in zip(bases, phis):
        if basis is None:
            indices.append(0)
            continue
        if previous is None:
            indices.append(0)
            previous = basis.signal_mode(0)
            continue
        overlaps = basis.overlaps(previous)
        best = int(np.argmax(overlaps))
        if overlaps[best] < threshold:
            raise ModeTrackingLost(phi, float(overlaps[best]))
        if indices and best != indices[-1]:
            logger.debug(f"First mode moved to index {best} at phi={phi:.4f} (overlap {overlaps[best]:.3f})")
        indices.append(best)
        previous = basis.signal_mode(best)
    return indices


def match_modes(previous: ModeBasis, current: ModeBasis) -> np.ndarray:
    """Permutation p with current mode p[k] continuing previous mode k.

    Assignment maximizes the summed |overlap| over retained modes.
    """
    prev_modes = previous.signal_matrix()
    cur_modes = current.signal_matrix()
    weights = previous.w_s
    overlap = np.abs((np.conj(prev_modes) * weights) @ cur_modes.T)
    rows, cols = linear_sum_assignment(-overlap)
    order = np.full(prev_modes.shape[0], -1, dtype=int)
    order[rows] = cols
    return order
