"""Benthic-drift population model: discretization, dynamics and spectra.

A two-compartment river population model — drifting larvae advected and
diffusing in the water column, sessile adults growing on the bed with a
strong Allee effect — discretized by an exponentially fitted finite-volume
scheme and analyzed through time integration, steady-state continuation,
and the spectrum of the linearization.
"""

from __future__ import annotations

from .config import BC_PROFILES, RunConfig, SweepConfig, load_config, parse_config, realize_initial
from .csvio import CsvTable, emit_csv, read_csv
from .discretize import (
    FieldPair,
    Grid,
    MassBalance,
    TransportOperator,
    assemble_transport,
    exp_transform,
    mass_balance,
)
from .equilibria import (
    Provenance,
    SteadyState,
    check_profile_monotone,
    lower_state_H3,
    max_steady_state,
    multiplicity_H2,
    newton_refine,
    solve_linear_bvp,
    steady_residual,
)
from .errors import (
    BadResolution,
    BenthdriftError,
    BracketFailure,
    ConvergenceFailure,
    DoubleRoot,
    GapConditionFailed,
    HitHorizon,
    LinearSolveFailure,
    NoRoots,
    NonPositiveEigenfunction,
    NonconformingGrowth,
    ParseError,
    RegimeMismatch,
    SchemaError,
    SingularSystem,
    StepRejected,
    UnknownPreset,
)
from .lyapunov import DecayAudit, EnergySample, audit_decay, energy
from .model import (
    AprioriBounds,
    GapCondition,
    GrowthKind,
    GrowthModel,
    Landmarks,
    ModelSpec,
    Regime,
    RegimeReport,
    RiverGeometry,
    apriori_bounds,
    bistability_gap_condition,
    classify_regime,
    custom_growth,
    derive_landmarks,
    level_roots,
    logistic,
    sine_pair_geometry,
    strong_allee_cubic,
    uniform_geometry,
)
from .presets import PRESET_NAMES, run_preset
from .spectral import (
    LinearizedBlocks,
    SensitivityReport,
    SpectrumReport,
    Verdict,
    assemble_linearization,
    classify_stability,
    critical_m2,
    eigen_sensitivity,
    principal_eigenvalue,
)
from .stepping import (
    BasinProbe,
    IntegratorConfig,
    Outcome,
    TrajectoryRecord,
    basin_probe,
    extinction_cone,
    simulate,
    step,
    stepper_backend,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "GrowthKind", "GrowthModel", "RiverGeometry", "ModelSpec",
    "Landmarks", "Regime", "RegimeReport", "AprioriBounds", "GapCondition",
    "strong_allee_cubic", "logistic", "custom_growth",
    "uniform_geometry", "sine_pair_geometry",
    "derive_landmarks", "classify_regime", "level_roots",
    "apriori_bounds", "bistability_gap_condition",
    # discretization
    "Grid", "FieldPair", "TransportOperator", "MassBalance",
    "assemble_transport", "exp_transform", "mass_balance",
    # stepping
    "IntegratorConfig", "Outcome", "TrajectoryRecord", "BasinProbe",
    "simulate", "step", "stepper_backend", "extinction_cone", "basin_probe",
    # equilibria
    "Provenance", "SteadyState",
    "solve_linear_bvp", "steady_residual", "newton_refine",
    "max_steady_state", "lower_state_H3", "multiplicity_H2",
    "check_profile_monotone",
    # spectral
    "LinearizedBlocks", "SpectrumReport", "Verdict", "SensitivityReport",
    "assemble_linearization", "principal_eigenvalue", "classify_stability",
    "eigen_sensitivity", "critical_m2",
    # lyapunov
    "EnergySample", "DecayAudit", "energy", "audit_decay",
    # configuration and I/O
    "RunConfig", "SweepConfig", "BC_PROFILES",
    "parse_config", "load_config", "realize_initial",
    "CsvTable", "emit_csv", "read_csv",
    "PRESET_NAMES", "run_preset",
    # errors
    "BenthdriftError", "ParseError", "SchemaError", "UnknownPreset",
    "NonconformingGrowth", "NoRoots", "DoubleRoot", "RegimeMismatch",
    "GapConditionFailed", "BadResolution", "SingularSystem",
    "LinearSolveFailure", "StepRejected", "HitHorizon",
    "ConvergenceFailure", "NonPositiveEigenfunction", "BracketFailure",
]
