"""Seed states and detection schemes for the signal arm."""

import math
from dataclasses import dataclass
from enum import Enum

from su11sim.errors import InvalidParameter

TWO_PI = 2.0 * math.pi


class SeedKind(str, Enum):
    VACUUM = "vacuum"
    SINGLE_PHOTON_FIRST_MODE = "single_photon_first_mode"
    COHERENT_FIRST_MODE = "coherent_first_mode"
    COHERENT_PLANE_WAVE = "coherent_plane_wave"

    @property
    def is_coherent(self) -> bool:
        return self in (SeedKind.COHERENT_FIRST_MODE, SeedKind.COHERENT_PLANE_WAVE)


class DetectionKind(str, Enum):
    DIRECT = "direct"
    HOMODYNE = "homodyne"


@dataclass(frozen=True)
class SeedSpec:
    """Seed in the signal arm; coherent amplitudes are real (alpha = sqrt(alpha2))."""

    kind: SeedKind = SeedKind.VACUUM
    alpha2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", SeedKind(self.kind))
        if not (math.isfinite(self.alpha2) and self.alpha2 >= 0):
            raise InvalidParameter(f"|alpha|^2 must be finite and >= 0, got {self.alpha2}")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha2)


@dataclass(frozen=True)
class DetectionSpec:
    kind: DetectionKind = DetectionKind.DIRECT
    theta_a: float = 0.0
    beta_lo: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", DetectionKind(self.kind))
        if not 0 <= self.theta_a < TWO_PI:
            raise InvalidParameter(f"local-oscillator phase must lie in [0, 2*pi), got {self.theta_a}")
        if self.kind == DetectionKind.HOMODYNE and not self.beta_lo > 0:
            raise InvalidParameter(f"local-oscillator amplitude must be > 0, got {self.beta_lo}")


def check_pairing(seed: SeedSpec, detection: DetectionSpec) -> None:
    """Homodyne detection needs a coherent seed to beat against."""
    if detection.kind == DetectionKind.HOMODYNE and not seed.kind.is_coherent:
        raise InvalidParameter(f"homodyne detection is undefined for a {seed.kind.value} seed")
