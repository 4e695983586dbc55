"""Uniform frequency grids with trapezoid quadrature weights."""

import hashlib
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from su11sim.dispersion.model import DispersionModel, Polarization
from su11sim.errors import InvalidParameter, OutOfWindow, TooCoarse

MIN_POINTS = 16


def uniform_axis(center: float, half_width: float, points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Axis symmetric about ``center`` and its trapezoid weights.

    Offsets are antisymmetrized so that the middle node of an odd axis is
    exactly ``center``.
    """
    if points < 2:
        raise TooCoarse(points, 2)
    if not half_width > 0:
        raise InvalidParameter(f"half-width must be > 0, got {half_width}")
    offsets = half_width * np.linspace(-1.0, 1.0, points)
    offsets = 0.5 * (offsets - offsets[::-1])
    axis = center + offsets
    step = 2.0 * half_width / (points - 1)
    weights = np.full(points, step)
    weights[0] = weights[-1] = 0.5 * step
    return axis, weights


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    signal: np.ndarray
    idler: np.ndarray
    w_s: np.ndarray
    w_i: np.ndarray
    center: float
    half_width_s: float
    half_width_i: float

    @property
    def n_s(self) -> int:
        return self.signal.size

    @property
    def n_i(self) -> int:
        return self.idler.size

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width_s / (self.n_s - 1)

    @property
    def center_index(self) -> Optional[int]:
        """Index of the on-grid centre node, ``None`` for even axes."""
        return self.n_s // 2 if self.n_s % 2 == 1 else None

    @property
    def is_square(self) -> bool:
        return self.n_s == self.n_i and self.half_width_s == self.half_width_i

    def digest(self) -> str:
        h = hashlib.sha1()
        for array in (self.signal, self.idler, self.w_s, self.w_i):
            h.update(np.ascontiguousarray(array).tobytes())
        return h.hexdigest()[:16]

    def refined(self) -> "FrequencyGrid":
        """Same span with the spacing halved; every old node is kept."""
        return build_grid(
            self.center,
            self.half_width_s,
            2 * self.n_s - 1,
            2 * self.n_i - 1,
            half_width_i=self.half_width_i,
        )

    def describe(self) -> dict:
        return {
            "center_rad_s": self.center,
            "half_width_s_rad_s": self.half_width_s,
            "half_width_i_rad_s": self.half_width_i,
            "n_s": self.n_s,
            "n_i": self.n_i,
            "spacing_rad_s": self.spacing,
        }


def build_grid(
    center: float,
    half_width: float,
    n_s: int,
    n_i: Optional[int] = None,
    model: Optional[DispersionModel] = None,
    half_width_i: Optional[float] = None,
    min_points: int = MIN_POINTS,
) -> FrequencyGrid:
    """Uniform signal/idler grid centred on the degenerate frequency.

    Args:
        center: Degenerate frequency w_p / 2 in rad/s
        half_width: Signal half-span in rad/s
        n_s: Signal points
        n_i: Idler points (defaults to ``n_s``)
        model: When given, every node and the pump sum must lie in its windows
        half_width_i: Idler half-span (defaults to ``half_width``)
        min_points: Smallest accepted axis length

    Raises:
        TooCoarse: fewer than ``min_points`` points on an axis
        OutOfWindow: grid leaves the dispersion validity window
    """
    n_i = n_s if n_i is None else n_i
    half_width_i = half_width if half_width_i is None else half_width_i
    for points in (n_s, n_i):
        if points < min_points:
            raise TooCoarse(points, min_points)

    signal, w_s = uniform_axis(center, half_width, n_s)
    idler, w_i = uniform_axis(center, half_width_i, n_i)

    if model is not None:
        for pol in Polarization:
            lo, hi = model.window(pol)
            for edge in (signal[0], signal[-1], idler[0], idler[-1]):
                if not lo <= edge <= hi:
                    raise OutOfWindow(edge, (lo, hi))
        lo, hi = model.window(Polarization.ORDINARY)
        for edge in (signal[0] + idler[0], signal[-1] + idler[-1]):
            if not lo <= edge <= hi:
                raise OutOfWindow(edge, (lo, hi))

    return FrequencyGrid(
        signal=_frozen(signal),
        idler=_frozen(idler),
        w_s=_frozen(w_s),
        w_i=_frozen(w_i),
        center=float(center),
        half_width_s=float(half_width),
        half_width_i=float(half_width_i),
    )
