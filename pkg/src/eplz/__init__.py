"""N-level Landau-Zener transitions through pairs of N-th order exceptional points.

Closed-form transition matrices for the Hermitian and PT-symmetric models,
the SL(2) -> SL(N) representation lift behind them, instantaneous
biorthogonal eigensystems, and a direct ODE integrator that cross-checks
everything numerically.
"""

from .analytic import (
    AdiabaticProjection,
    TransitionMatrix,
    adiabatic_P,
    adiabatic_P_exact,
    adiabatic_projection,
    analytic_transition_matrix,
    hermitian_M,
    lz2_survival,
    normalize,
    pt_M,
    pt_P_column0,
)
from .errors import (
    AsymptoteNotReachedError,
    DegenerateNormalizationError,
    DegenerateSpinorError,
    EplzError,
    IntegrationFailureError,
    InvalidDimensionError,
    NearEPError,
    NoEPError,
    NotUnimodularError,
)
from .model import (
    EigenSystem,
    EPData,
    ModelKind,
    ModelParams,
    SpectrumTable,
    ep_data,
    ep_guard,
    ep_times,
    eigensystem_at,
    hamiltonian_at,
    lambda_at,
    overlap_matrix,
    parity_matrix,
    pt_similarity_pair,
    spectrum_sweep,
    x_parameter,
)
from .propagate import (
    IntegratorConfig,
    PropagationResult,
    SweepPoint,
    alpha_sweep,
    evolve,
    numeric_transition_matrix,
)
from .repr_lift import lift, lift_entry
from .su2_ops import SpinSpace, build_generators, coherent_state, jy_eigenbasis

__version__ = "0.1.0"

__all__ = [
    "AdiabaticProjection",
    "AsymptoteNotReachedError",
    "DegenerateNormalizationError",
    "DegenerateSpinorError",
    "EPData",
    "EigenSystem",
    "EplzError",
    "IntegrationFailureError",
    "IntegratorConfig",
    "InvalidDimensionError",
    "ModelKind",
    "ModelParams",
    "NearEPError",
    "NoEPError",
    "NotUnimodularError",
    "PropagationResult",
    "SpectrumTable",
    "SpinSpace",
    "SweepPoint",
    "TransitionMatrix",
    "adiabatic_P",
    "adiabatic_P_exact",
    "adiabatic_projection",
    "alpha_sweep",
    "analytic_transition_matrix",
    "build_generators",
    "coherent_state",
    "ep_data",
    "ep_guard",
    "ep_times",
    "eigensystem_at",
    "evolve",
    "hamiltonian_at",
    "hermitian_M",
    "jy_eigenbasis",
    "lambda_at",
    "lift",
    "lift_entry",
    "lz2_survival",
    "normalize",
    "numeric_transition_matrix",
    "overlap_matrix",
    "parity_matrix",
    "pt_M",
    "pt_P_column0",
    "pt_similarity_pair",
    "spectrum_sweep",
    "x_parameter",
    "__version__",
]
