"""
Mixedness Timescales Module.

This module evolves finite-dimensional quantum states under effective
non-Hermitian Hamiltonians, tracks their linear entropy, and evaluates the
short-time mixedness timescales in closed form, for single systems and for
the marginals of bipartite systems.
"""

__version__ = "1.0.0"
__author__ = "Mixedness Timescales Team"

from .errors import ConfigError, MixednessError, NumericalError, ValidationError
from .linalg_core import (
    anticommutator,
    commutator,
    hermitian_split,
    matrix_exponential,
    partial_trace,
    tensor_product,
)
from .states import (
    BlochParams,
    DensityMatrix,
    entropy_qfi_bound,
    ghz_mixed_state,
    linear_entropy,
    purity,
    qfi_mixed,
    qubit_from_bloch,
    renyi2_consistency,
    separability_threshold,
)
from .hamiltonians import (
    JumpChannel,
    NonHermitianHamiltonian,
    driven_qubit,
    effective_from_jumps,
    ising_all_to_all,
    pauli_string,
    xy_chain,
)
from .dynamics import (
    EvolutionLaw,
    MetricTrajectory,
    Trajectory,
    evolve_lindblad,
    evolve_metric,
    evolve_normalized,
    purity_derivatives,
    reduced_trajectory,
)
from .timescales import (
    TimescaleReport,
    bipartite_coefficients,
    cov,
    ghz_xy_coefficients,
    qubit_coefficients,
    separable_pure_coefficients,
    short_time_entropy,
    short_time_entropy_bipartite,
    t1_inverse,
    t2_inverse_sq,
)
from .config import ExperimentConfig, resolve_config

__all__ = [
    # Errors
    "MixednessError",
    "ValidationError",
    "NumericalError",
    "ConfigError",
    # Linear algebra
    "tensor_product",
    "partial_trace",
    "hermitian_split",
    "matrix_exponential",
    "commutator",
    "anticommutator",
    # States
    "DensityMatrix",
    "BlochParams",
    "purity",
    "linear_entropy",
    "renyi2_consistency",
    "qubit_from_bloch",
    "ghz_mixed_state",
    "qfi_mixed",
    "entropy_qfi_bound",
    "separability_threshold",
    # Hamiltonians
    "NonHermitianHamiltonian",
    "JumpChannel",
    "driven_qubit",
    "effective_from_jumps",
    "xy_chain",
    "ising_all_to_all",
    "pauli_string",
    # Dynamics
    "EvolutionLaw",
    "Trajectory",
    "MetricTrajectory",
    "evolve_normalized",
    "evolve_lindblad",
    "reduced_trajectory",
    "evolve_metric",
    "purity_derivatives",
    # Timescales
    "TimescaleReport",
    "cov",
    "t1_inverse",
    "t2_inverse_sq",
    "short_time_entropy",
    "qubit_coefficients",
    "bipartite_coefficients",
    "short_time_entropy_bipartite",
    "separable_pure_coefficients",
    "ghz_xy_coefficients",
    # Configuration
    "ExperimentConfig",
    "resolve_config",
]
