#!/usr/bin/env python3
"""
Spin-chain experiments: GHZ mixed state of N spins under the XY chain (h1)
plus the all-to-all Ising term (h2), observed on the first k sites.

- fig3: exact marginal linear entropy next to the short-time predictor.
- fig4/fig5: predictor at the configured Jz/J next to the Jz = 0 predictor;
  ``with_exact`` adds both exact curves.

Time is in units of 1/J.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from mixedness.dynamics import evolve_normalized, reduced_trajectory
from mixedness.experiments.base_experiment import BaseExperiment
from mixedness.hamiltonians import NonHermitianHamiltonian, ghz_xy_hamiltonian
from mixedness.run_store import PlotSpec, ResultTable
from mixedness.states import DensityMatrix, ghz_mixed_state
from mixedness.templates import EXACT_COLUMNS
from mixedness.timescales import TimescaleReport, ghz_xy_coefficients, short_time_entropy_bipartite

logger = logging.getLogger(__name__)

CLOSED_FORM_ATOL = 1e-10

CHAIN_COLUMNS = ["J_t", "k", "p", "sl_exact", "sl_short_time"]


class SpinChainExperiment(BaseExperiment):
    """Marginal entropies of the GHZ mixed state, one block per (p, k)."""

    @property
    def compares_hermitian(self) -> bool:
        return self.config.experiment in ("fig4", "fig5")

    @property
    def needs_exact(self) -> bool:
        return not self.compares_hermitian or self.config.with_exact

    def columns(self) -> List[str]:
        columns = list(self.template.get("columns") or CHAIN_COLUMNS)
        if self.compares_hermitian and self.config.with_exact:
            columns += EXACT_COLUMNS
        return columns

    def hamiltonian(self, ising_ratio: float) -> NonHermitianHamiltonian:
        cfg = self.config
        return ghz_xy_hamiltonian(cfg.spins, cfg.coupling, cfg.anisotropy,
                                  ising_ratio * cfg.coupling, cfg.transverse_field)

    def _check_closed_form(self, k: int, p: float, ising_coupling: float, report: TimescaleReport) -> None:
        cfg = self.config
        if cfg.transverse_field != 0.0 or k < 2:
            return
        closed = ghz_xy_coefficients(cfg.spins, k, p, cfg.coupling, cfg.anisotropy, ising_coupling)
        generic = report.components
        for name, value, reference in zip(("t1nh_inv", "t2h_inv_sq", "t2nh_inv_sq"), closed,
                                          (generic.t1nh_inv, generic.t2h_inv_sq, generic.t2nh_inv_sq)):
            if abs(value - reference) > CLOSED_FORM_ATOL * max(1.0, abs(reference)):
                logger.warning(f"closed form {name}={value:.12g} differs from generic {reference:.12g} "
                               f"(N={cfg.spins}, k={k}, p={p})")

    def _curves(self, rho0: DensityMatrix, h: NonHermitianHamiltonian, p: float, ising_coupling: float,
                times: np.ndarray, exact: bool) -> Dict[int, Tuple[np.ndarray, Optional[np.ndarray]]]:
        """{k: (predictor, exact or None)} for every configured subsystem size."""
        cfg = self.config
        trajectory = evolve_normalized(rho0, h, times) if exact else None
        curves = {}
        for k in cfg.subsystem_sizes:
            dims = (2 ** k, 2 ** (cfg.spins - k))
            report = short_time_entropy_bipartite(rho0, dims, h)
            self._check_closed_form(k, p, ising_coupling, report)
            exact_curve = None
            if trajectory is not None:
                exact_curve = reduced_trajectory(trajectory, dims, [0]).linear_entropies()
            curves[k] = (report.predict(times), exact_curve)
        return curves

    def block(self, p: float) -> List[tuple]:
        cfg = self.config
        jt = self.time_grid()
        times = jt / abs(cfg.coupling)
        rho0 = ghz_mixed_state(cfg.spins, p)

        ising_coupling = cfg.ising_ratio * cfg.coupling
        main = self._curves(rho0, self.hamiltonian(cfg.ising_ratio), p, ising_coupling, times, self.needs_exact)
        hermitian = None
        if self.compares_hermitian:
            hermitian = self._curves(rho0, self.hamiltonian(0.0), p, 0.0, times, cfg.with_exact)

        rows = []
        for k in cfg.subsystem_sizes:
            predicted, exact = main[k]
            for i, t in enumerate(jt):
                if hermitian is None:
                    rows.append((float(t), k, p, float(exact[i]), float(predicted[i])))
                    continue
                predicted_h, exact_h = hermitian[k]
                row = (float(t), k, p, float(predicted[i]), float(predicted_h[i]))
                if cfg.with_exact:
                    row += (float(exact[i]), float(exact_h[i]))
                rows.append(row)
        return rows

    def build_table(self) -> ResultTable:
        blocks = self.executor.map(self.block, self.config.mixing_values)
        return ResultTable(self.columns(), [row for rows in blocks for row in rows])

    def plot_spec(self) -> PlotSpec:
        return PlotSpec(x="J_t", y=self.columns()[3:], groups=["p", "k"])
