from su11sim.validation.acceptance import (
    CRITERIA,
    AcceptanceReport,
    CriterionResult,
    format_report,
    run_acceptance,
)
from su11sim.validation.oracles import (
    double_gaussian_jsa,
    double_gaussian_kernel,
    fock_kernel_moments,
    fock_moments,
    mehler_eigenvalues,
    mehler_ratio,
    two_mode_squeezer,
)

__all__ = [
    "CRITERIA",
    "AcceptanceReport",
    "CriterionResult",
    "format_report",
    "run_acceptance",
    "double_gaussian_jsa",
    "double_gaussian_kernel",
    "fock_kernel_moments",
    "fock_moments",
    "mehler_eigenvalues",
    "mehler_ratio",
    "two_mode_squeezer",
]
