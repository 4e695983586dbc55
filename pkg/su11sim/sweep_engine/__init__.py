from su11sim.sweep_engine.context import build_context, load_model, physics_hash, resolve_poling_period
from su11sim.sweep_engine.convergence import ConvergenceReport, GateEntry, apply_gate, convergence_gate
from su11sim.sweep_engine.engine import (
    PhaseSweepData,
    collect_phase_data,
    evaluate_gamma,
    phase_grid,
    run_gain_sweep,
    run_phase_sweep,
)
from su11sim.sweep_engine.results import GammaSummary, SweepResult, SweepSummary, write_outputs
from su11sim.sweep_engine.worker import PhaseWorker, SweepContext, SweepPoint, compute_point

__all__ = [
    "build_context",
    "load_model",
    "physics_hash",
    "resolve_poling_period",
    "ConvergenceReport",
    "GateEntry",
    "apply_gate",
    "convergence_gate",
    "PhaseSweepData",
    "collect_phase_data",
    "evaluate_gamma",
    "phase_grid",
    "run_gain_sweep",
    "run_phase_sweep",
    "GammaSummary",
    "SweepResult",
    "SweepSummary",
    "write_outputs",
    "PhaseWorker",
    "SweepContext",
    "SweepPoint",
    "compute_point",
]
