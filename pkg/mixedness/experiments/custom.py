#!/usr/bin/env python3
"""
Custom runs through the same pipeline as the figures.

``model`` selects the system:

- two_level: the driven, decaying qubit (same rows as fig2);
- spin_chain: the GHZ mixed state under XY + Ising (same rows as fig3);
- matrix: an initial state and a generator H = h1 + i·h2 read from ``.npy``
  files, optionally observed on the first factor of ``subsystem_dims``.
"""

import logging
from pathlib import Path

import numpy as np

from mixedness.config import ExperimentConfig
from mixedness.dynamics import evolve_normalized, reduced_trajectory
from mixedness.errors import ConfigError, DimensionMismatchError
from mixedness.experiments.base_experiment import BaseExperiment
from mixedness.experiments.spin_chain import CHAIN_COLUMNS, SpinChainExperiment
from mixedness.experiments.two_level import TWO_LEVEL_CURVE_COLUMNS, EntropyCurveExperiment
from mixedness.hamiltonians import NonHermitianHamiltonian
from mixedness.run_store import PlotSpec, ResultTable
from mixedness.states import DensityMatrix
from mixedness.timescales import short_time_entropy, short_time_entropy_bipartite

logger = logging.getLogger(__name__)

MATRIX_COLUMNS = ["t", "sl_exact", "sl_short_time"]


def _load_array(path: str, name: str) -> np.ndarray:
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"file not found: {file_path}", field=name)
    try:
        return np.load(file_path, allow_pickle=False)
    except ValueError as e:
        raise ConfigError(f"cannot read {file_path}: {e}", field=name)


def load_state(path: str) -> DensityMatrix:
    """A density matrix, or a state vector turned into its projector."""
    array = _load_array(path, "state_file")
    if array.ndim == 1:
        return DensityMatrix.from_ket(array)
    return DensityMatrix(array)


def load_hamiltonian(path: str) -> NonHermitianHamiltonian:
    """
    A generator from one square array H, or a stacked (2, d, d) array (h1, h2).
    """
    array = _load_array(path, "hamiltonian_file")
    if array.ndim == 3 and array.shape[0] == 2:
        return NonHermitianHamiltonian(array[0], array[1])
    return NonHermitianHamiltonian.from_matrix(array)


class MatrixExperiment(BaseExperiment):
    """Exact and short-time linear entropy for user-supplied matrices."""

    def build_table(self) -> ResultTable:
        cfg = self.config
        rho0 = load_state(cfg.state_file)
        h = load_hamiltonian(cfg.hamiltonian_file)
        if h.dim != rho0.dim:
            raise DimensionMismatchError(f"state dimension {rho0.dim} does not match generator {h.dim}")

        times = self.time_grid()
        trajectory = evolve_normalized(rho0, h, times)
        if cfg.subsystem_dims:
            dims = tuple(cfg.subsystem_dims)
            if len(dims) != 2:
                raise ConfigError("give two dimensions (d_A, d_B)", field="subsystem_dims")
            report = short_time_entropy_bipartite(rho0, dims, h)
            exact = reduced_trajectory(trajectory, dims, [0]).linear_entropies()
        else:
            report = short_time_entropy(rho0, h)
            exact = trajectory.linear_entropies()
        predicted = report.predict(times)
        logger.info(f"1/T1={report.t1_inv:.6g}, 1/T2^2={report.t2_inv_sq:.6g}")
        return ResultTable(MATRIX_COLUMNS, [(float(t), float(e), float(s))
                                            for t, e, s in zip(times, exact, predicted)])

    def plot_spec(self) -> PlotSpec:
        return PlotSpec(x="t", y=["sl_exact", "sl_short_time"])


CUSTOM_MODELS = {
    "two_level": (EntropyCurveExperiment, TWO_LEVEL_CURVE_COLUMNS),
    "spin_chain": (SpinChainExperiment, CHAIN_COLUMNS),
    "matrix": (MatrixExperiment, MATRIX_COLUMNS),
}


def custom_experiment(config: ExperimentConfig, **kwargs) -> BaseExperiment:
    """The runner for ``config.model``, writing that model's columns."""
    experiment_class, columns = CUSTOM_MODELS[config.model]
    experiment = experiment_class(config, **kwargs)
    experiment.template["columns"] = list(columns)
    return experiment