"""Simulation and optimization toolkit for ab initio phase estimation at N=3.

Modules: ``quantum`` (states, gates, X-basis measurement), ``hpea`` (the
entangled multipass protocol with feedforward), ``snl`` (independent-photon
baseline), ``schemes`` (probe/policy optimizer), ``optics`` (waveplate
model) and ``cli``.
"""

__version__ = "0.1.0"

from .holevo import PhaseSweepResult, holevo_from_sharpness
from .hpea import (
    OutcomeDistribution,
    ProtocolConfig,
    exact_variance,
    heisenberg_limit,
    optimal_state,
    outcome_distribution_exact,
    phase_sweep,
    run_single_shot,
)
from .quantum import DensityMatrix, PureState, StateValidationError, load_density_matrix
from .schemes import OptimizationResult, PolicyParameters, SchemeSpec, evaluate_scheme, optimize_scheme
from .snl import SnlConfig, snl_estimate, snl_exact_variance, snl_simulate

__all__ = [
    "DensityMatrix",
    "OptimizationResult",
    "OutcomeDistribution",
    "PhaseSweepResult",
    "PolicyParameters",
    "ProtocolConfig",
    "PureState",
    "SchemeSpec",
    "SnlConfig",
    "StateValidationError",
    "evaluate_scheme",
    "exact_variance",
    "heisenberg_limit",
    "holevo_from_sharpness",
    "load_density_matrix",
    "optimal_state",
    "optimize_scheme",
    "outcome_distribution_exact",
    "phase_sweep",
    "run_single_shot",
    "snl_estimate",
    "snl_exact_variance",
    "snl_simulate",
]
