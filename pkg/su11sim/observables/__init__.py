from su11sim.observables.asymptotes import (
    asymptote_coherent_direct,
    asymptote_high_gain,
    asymptote_low_gain,
    high_gain_floor,
)
from su11sim.observables.sensitivity import (
    DERIVATIVE_NOISE,
    ObservableSeries,
    analytic_dN_dphi,
    assemble_series,
    band_width,
    dN_dphi,
    derivative_sweep,
    find_min_sensitivity,
    is_full_period,
    phase_sensitivity,
    richardson_check,
    snl_vacuum,
    stationary_tolerance,
    supersensitivity_bands,
    visibility,
)
from su11sim.observables.vacuum import (
    eigenvalues_of,
    mean_photons_vacuum,
    mode_gains,
    photon_rate,
    truncation_bound,
    variance_vacuum,
)

__all__ = [
    "DERIVATIVE_NOISE",
    "ObservableSeries",
    "analytic_dN_dphi",
    "assemble_series",
    "asymptote_coherent_direct",
    "asymptote_high_gain",
    "asymptote_low_gain",
    "band_width",
    "dN_dphi",
    "derivative_sweep",
    "eigenvalues_of",
    "find_min_sensitivity",
    "high_gain_floor",
    "is_full_period",
    "mean_photons_vacuum",
    "mode_gains",
    "phase_sensitivity",
    "photon_rate",
    "richardson_check",
    "snl_vacuum",
    "stationary_tolerance",
    "supersensitivity_bands",
    "truncation_bound",
    "variance_vacuum",
    "visibility",
]
