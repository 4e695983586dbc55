from su11sim.schmidt.calibration import GainCalibration, calibrate_gain, schmidt_number
from su11sim.schmidt.decomposition import (
    DEFAULT_K_MAX,
    BinModes,
    DenseModes,
    ModeBasis,
    SchmidtDecomposition,
    schmidt_decompose,
)
from su11sim.schmidt.tracking import ARGMAX, TRACKED, match_modes, track_first_mode

__all__ = [
    "ARGMAX",
    "DEFAULT_K_MAX",
    "TRACKED",
    "BinModes",
    "DenseModes",
    "GainCalibration",
    "ModeBasis",
    "SchmidtDecomposition",
    "calibrate_gain",
    "match_modes",
    "schmidt_decompose",
    "schmidt_number",
    "track_first_mode",
]
