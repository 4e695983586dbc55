from su11sim.jsa.builder import (
    ANTIDIAGONAL,
    DENSE,
    JointSpectralAmplitude,
    build_jsa,
    build_jsa_compensated,
    build_jsa_cw,
    build_jsa_noncompensated,
    build_jsa_single_section,
    jsa_from_samples,
    sinc,
    weighted_norm,
)
from su11sim.jsa.grid import FrequencyGrid, build_grid, uniform_axis

__all__ = [
    "ANTIDIAGONAL",
    "DENSE",
    "FrequencyGrid",
    "JointSpectralAmplitude",
    "build_grid",
    "build_jsa",
    "build_jsa_compensated",
    "build_jsa_cw",
    "build_jsa_noncompensated",
    "build_jsa_single_section",
    "jsa_from_samples",
    "sinc",
    "uniform_axis",
    "weighted_norm",
]
