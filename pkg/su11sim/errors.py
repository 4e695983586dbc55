"""Exception hierarchy for the simulator.

Configuration problems map to exit code 2, everything raised while computing
maps to exit code 1 (see ``su11sim.main``).
"""

from typing import Any, Dict, Optional


class Su11Error(Exception):
    """Base error carrying an optional short code and structured details."""

    exit_code = 1

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.code = code
        self.details = details or {}

    def __str__(self):
        if self.code:
            return f"[{self.code}] {self.message}"
        return self.message


class ConfigError(Su11Error):
    """Run configuration or input file is invalid."""

    exit_code = 2


class ComputeError(Su11Error):
    """A numerical stage could not produce a result."""


class InvalidParameter(ComputeError, ValueError):
    """A domain type was constructed with values violating its invariants."""


class OutOfWindow(ComputeError):
    def __init__(self, omega: float, window):
        super().__init__(
            f"angular frequency {omega:.6e} rad/s outside validity window "
            f"[{window[0]:.6e}, {window[1]:.6e}]",
            code="out_of_window",
            details={"omega": float(omega), "window": [float(w) for w in window]},
        )


class StencilOutOfWindow(ComputeError):
    def __init__(self, omega: float, step: float):
        super().__init__(
            f"finite-difference stencil at {omega:.6e} rad/s (step {step:.3e}) leaves the window",
            code="stencil_out_of_window",
            details={"omega": float(omega), "step": float(step)},
        )


class NoSolution(ComputeError):
    def __init__(self, bare_mismatch: float):
        super().__init__(
            f"no positive poling period: bare mismatch is {bare_mismatch:.6e} rad/m",
            code="no_solution",
            details={"bare_mismatch": float(bare_mismatch)},
        )


class CWRegime(ComputeError):
    def __init__(self):
        super().__init__(
            "pump envelope is undefined for a CW pump; use the reduced CW builder",
            code="cw_regime",
        )


class TooCoarse(ComputeError):
    def __init__(self, points: int, minimum: int):
        super().__init__(
            f"grid with {points} points is below the minimum of {minimum}",
            code="too_coarse",
            details={"points": points, "minimum": minimum},
        )


class DegenerateJSA(ComputeError):
    def __init__(self, message: str = "joint spectral amplitude has zero norm"):
        super().__init__(message, code="degenerate_jsa")


class ConvergenceFailure(ComputeError):
    def __init__(self, message: str):
        super().__init__(message, code="svd_convergence")


class ModeTrackingLost(ComputeError):
    def __init__(self, phi: float, overlap: float):
        super().__init__(
            f"first Schmidt mode lost at phi={phi:.6f} (best overlap {overlap:.3f})",
            code="mode_tracking_lost",
            details={"phi": float(phi), "overlap": float(overlap)},
        )


class BoundaryPoint(ComputeError):
    def __init__(self, index: int):
        super().__init__(
            f"central difference needs both neighbours; index {index} is a sweep boundary",
            code="boundary_point",
            details={"index": index},
        )


class ZeroPhotons(ComputeError):
    def __init__(self, message: str = "reference arm carries no photons; SNL diverges"):
        super().__init__(message, code="zero_photons")


class BandOutsideGrid(ComputeError):
    def __init__(self, low: float, high: float, grid_low: float, grid_high: float):
        super().__init__(
            f"filter band [{low:.6e}, {high:.6e}] exceeds grid [{grid_low:.6e}, {grid_high:.6e}]",
            code="band_outside_grid",
            details={"band": [low, high], "grid": [grid_low, grid_high]},
        )


class AllInfinite(ComputeError):
    def __init__(self):
        super().__init__(
            "every sweep point is infinite or undefined; no minimum exists",
            code="all_infinite",
        )


class ConvergenceGateFailed(ComputeError):
    def __init__(self, report: Dict[str, Any]):
        super().__init__(
            f"grid-refinement drift {report.get('max_drift', float('nan')):.3e} exceeds "
            f"threshold {report.get('threshold', float('nan')):.3e}",
            code="convergence_gate",
            details=report,
        )
