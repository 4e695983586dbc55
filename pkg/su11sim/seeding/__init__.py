from su11sim.seeding.direct import (
    coherent_moments,
    coherent_snl,
    first_mode_indices,
    seeded_direct_coherent,
    seeded_direct_single_photon,
    single_photon_moments,
    single_photon_snl,
)
from su11sim.seeding.homodyne import (
    center_density,
    first_mode_moments,
    first_mode_snl,
    homodyne_first_mode,
    homodyne_plane_wave,
    plane_wave_moments,
    plane_wave_photons,
    plane_wave_snl,
)
from su11sim.seeding.specs import DetectionKind, DetectionSpec, SeedKind, SeedSpec, check_pairing

__all__ = [
    "DetectionKind",
    "DetectionSpec",
    "SeedKind",
    "SeedSpec",
    "center_density",
    "check_pairing",
    "coherent_moments",
    "coherent_snl",
    "first_mode_indices",
    "first_mode_moments",
    "first_mode_snl",
    "homodyne_first_mode",
    "homodyne_plane_wave",
    "plane_wave_moments",
    "plane_wave_photons",
    "plane_wave_snl",
    "seeded_direct_coherent",
    "seeded_direct_single_photon",
    "single_photon_moments",
    "single_photon_snl",
]
