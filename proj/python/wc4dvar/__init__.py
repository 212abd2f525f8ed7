"""Spectral analysis of the weak-constraint 4D-Var saddle point systems.

Thin Python surface over the C++ core: Lorenz 96 twin experiments, the
three linear-system formulations, MINRES/CG solves, full spectra and the
closed-form eigenvalue bounds.
"""

from ._core import (
    BlowupError,
    BoundsReport,
    ConfigError,
    ContainmentVerdict,
    CovarianceSpec,
    ExperimentConfig,
    Formulation,
    Interval,
    ModelConfig,
    NetworkAnalysis,
    NotSpdError,
    NumericalError,
    ObservationNetwork,
    SolveLog,
    SolverConfig,
    SpectralSummary,
    Spectrum,
    Trajectory,
    TwinData,
    analyze_network,
    integrate,
    named_network,
    reproduce_figures,
    reproduce_tables,
    run_twin,
    soar_matrix,
    solve,
    sym_eig,
    tendency,
    verify,
)

__all__ = [
    "BlowupError",
    "BoundsReport",
    "ConfigError",
    "ContainmentVerdict",
    "CovarianceSpec",
    "ExperimentConfig",
    "Formulation",
    "Interval",
    "ModelConfig",
    "NetworkAnalysis",
    "NotSpdError",
    "NumericalError",
    "ObservationNetwork",
    "SolveLog",
    "SolverConfig",
    "SpectralSummary",
    "Spectrum",
    "Trajectory",
    "TwinData",
    "analyze_network",
    "integrate",
    "named_network",
    "reproduce_figures",
    "reproduce_tables",
    "run_twin",
    "soar_matrix",
    "solve",
    "sym_eig",
    "tendency",
    "verify",
]
