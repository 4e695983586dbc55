from su11sim.phasematch.mismatch import (
    DeviceGeometry,
    ModulatorSpec,
    PumpSpec,
    Regime,
    Variant,
    delta_beta,
    delta_beta_bar,
    modulator_phase,
    pump_envelope,
)

__all__ = [
    "DeviceGeometry",
    "ModulatorSpec",
    "PumpSpec",
    "Regime",
    "Variant",
    "delta_beta",
    "delta_beta_bar",
    "modulator_phase",
    "pump_envelope",
]
