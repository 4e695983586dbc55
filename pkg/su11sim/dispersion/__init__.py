from su11sim.dispersion.loader import DispersionEntry, load_dispersion_file, parse_dispersion_entries
from su11sim.dispersion.model import (
    C_LIGHT,
    KTP_WINDOW,
    DispersionModel,
    Polarization,
    SellmeierProfile,
    TabulatedProfile,
    constant_index_model,
    default_ktp,
    degenerate_mismatch,
    group_velocity,
    omega_to_wavelength,
    poling_period,
    refractive_index,
    wavelength_to_omega,
    wavevector,
)

__all__ = [
    "C_LIGHT",
    "KTP_WINDOW",
    "DispersionEntry",
    "DispersionModel",
    "Polarization",
    "SellmeierProfile",
    "TabulatedProfile",
    "constant_index_model",
    "default_ktp",
    "degenerate_mismatch",
    "group_velocity",
    "load_dispersion_file",
    "omega_to_wavelength",
    "parse_dispersion_entries",
    "poling_period",
    "refractive_index",
    "wavelength_to_omega",
    "wavevector",
]
