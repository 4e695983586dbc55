from su11sim.filtering.filters import (
    CENTRAL_LOBE_HALF_WIDTH,
    BandProjection,
    FilterShape,
    FilterSpec,
    band_weights,
    filter_weights,
    filtered_error_budget,
    filtered_mean,
    filtered_sensitivity_sweep,
    filtered_snl,
    filtered_snl_from_mass,
    filtered_variance,
    project_band,
    resolve_filter,
)

__all__ = [
    "CENTRAL_LOBE_HALF_WIDTH",
    "BandProjection",
    "FilterShape",
    "FilterSpec",
    "band_weights",
    "filter_weights",
    "filtered_error_budget",
    "filtered_mean",
    "filtered_sensitivity_sweep",
    "filtered_snl",
    "filtered_snl_from_mass",
    "filtered_variance",
    "project_band",
    "resolve_filter",
]
