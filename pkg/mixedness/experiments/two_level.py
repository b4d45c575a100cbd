#!/usr/bin/env python3
"""
Two-level system experiments: the driven qubit with spontaneous decay.

- fig1: 1/(γT₁) and 1/(γ²T₂²) over the (r, θ) plane.
- fig2: linear entropy under unitary, Lindblad and normalized non-Hermitian
  evolution, next to the short-time predictor.
- fig6/fig7: first and second purity derivatives at t = 0 against the
  timescale formulas.

Rates and times are in units of γ (γ = 1 internally).
"""

import itertools
import logging
import math
from typing import List, Tuple

import numpy as np

from mixedness.dynamics import (
    central_derivative,
    evolve_lindblad,
    evolve_normalized,
    lindblad_purity_derivatives,
    lindblad_state_at,
    normalized_state_at,
)
from mixedness.experiments.base_experiment import BaseExperiment
from mixedness.hamiltonians import NonHermitianHamiltonian, decay_channel, driven_qubit, effective_from_jumps
from mixedness.run_store import PlotSpec, ResultTable
from mixedness.states import BlochParams, linear_entropy, qubit_from_bloch
from mixedness.timescales import qubit_coefficients, short_time_entropy

logger = logging.getLogger(__name__)

GAMMA = 1.0
FD_CHECK_TOLERANCE = 1e-6

TWO_LEVEL_CURVE_COLUMNS = ["omega_over_gamma", "theta", "gamma_t", "sl_const", "sl_lindblad",
                           "sl_nonhermitian_exact", "sl_short_time"]


def _matrix_purity(m: np.ndarray) -> float:
    return float(np.sum(np.abs(m) ** 2))


class QubitModel:
    """Hamiltonian, decay channel and effective generator at one drive strength."""

    def __init__(self, detuning_over_gamma: float, omega_over_gamma: float):
        self.omega_over_gamma = omega_over_gamma
        self.hamiltonian = driven_qubit(detuning_over_gamma * GAMMA, omega_over_gamma * GAMMA)
        self.channels = [decay_channel(GAMMA)]
        self.effective = effective_from_jumps(self.hamiltonian, self.channels)


class TimescaleMapExperiment(BaseExperiment):
    """Closed-form timescale maps over an (r, θ) mesh, one block per Ω/γ."""

    def build_table(self) -> ResultTable:
        cfg = self.config
        radii = np.linspace(0.0, 1.0, cfg.mesh)
        thetas = np.linspace(0.0, math.pi, cfg.mesh)

        def block(point: Tuple[float, float]) -> List[tuple]:
            omega, r = point
            rows = []
            for theta in thetas:
                t1, t2 = qubit_coefficients(BlochParams(float(r), float(theta), cfg.phi), omega)
                rows.append((omega, float(r), float(theta), t1, t2))
            return rows

        blocks = self.executor.map(block, itertools.product(cfg.omega_values, radii))
        return ResultTable(self.template["columns"], [row for rows in blocks for row in rows])

    def plot_spec(self) -> PlotSpec:
        return PlotSpec(x="r", y=["t1_inv_dimless", "t2_inv_sq_dimless"], groups=["omega_over_gamma"],
                        surface=True, surface_y="theta")


class EntropyCurveExperiment(BaseExperiment):
    """Four linear-entropy curves per (Ω/γ, θ) panel."""

    def panel(self, omega: float, theta: float) -> List[tuple]:
        cfg = self.config
        model = QubitModel(cfg.detuning_over_gamma, omega)
        rho0 = qubit_from_bloch(BlochParams(cfg.r, theta, cfg.phi))
        grid = self.time_grid()

        lindblad = evolve_lindblad(rho0, model.hamiltonian, model.channels, grid).linear_entropies()
        exact = evolve_normalized(rho0, model.effective, grid).linear_entropies()
        predicted = short_time_entropy(rho0, model.effective).predict(grid)
        constant = linear_entropy(rho0)
        return [(omega, theta, float(t), constant, float(sl), float(se), float(sp))
                for t, sl, se, sp in zip(grid * GAMMA, lindblad, exact, predicted)]

    def build_table(self) -> ResultTable:
        cfg = self.config
        panels = self.executor.map(lambda point: self.panel(*point),
                                   itertools.product(cfg.omega_values, cfg.theta_values))
        columns = self.template.get("columns") or TWO_LEVEL_CURVE_COLUMNS
        return ResultTable(columns, [row for rows in panels for row in rows])

    def plot_spec(self) -> PlotSpec:
        return PlotSpec(x="gamma_t", y=["sl_const", "sl_lindblad", "sl_nonhermitian_exact", "sl_short_time"],
                        groups=["omega_over_gamma", "theta"])


class DerivativeComparisonExperiment(BaseExperiment):
    """
    Purity derivatives at t = 0 against the timescale formulas.

    Order 1 reports f'(0) = −[(d−1)/d]·dS_L/dt next to 1/(γT₁); order 2
    reports f''(0)/2 next to 1/(γ²T₂²). All three derivative
    columns are Richardson-extrapolated central differences with step
    ``fd_step``. The unitary column conserves purity, so it only shows the
    rounding floor of the stencil.
    """

    def __init__(self, *args, order: int = 1, **kwargs):
        super().__init__(*args, **kwargs)
        self.order = order
        self.scale = 1.0 if order == 1 else 0.5

    def point(self, omega: float, theta: float, r: float) -> tuple:
        cfg = self.config
        model = QubitModel(cfg.detuning_over_gamma, omega)
        b = BlochParams(r, theta, cfg.phi)
        rho0 = qubit_from_bloch(b)
        m0 = rho0.matrix

        closed = NonHermitianHamiltonian.hermitian(model.hamiltonian)
        unitary = central_derivative(
            lambda t: _matrix_purity(normalized_state_at(m0, closed, t)),
            cfg.fd_step, self.order)
        lindblad = central_derivative(
            lambda t: _matrix_purity(lindblad_state_at(m0, model.hamiltonian, model.channels, t)),
            cfg.fd_step, self.order)
        nonhermitian = central_derivative(
            lambda t: _matrix_purity(normalized_state_at(m0, model.effective, t)),
            cfg.fd_step, self.order)
        formula = qubit_coefficients(b, omega)[self.order - 1]

        analytic = lindblad_purity_derivatives(rho0, model.hamiltonian, model.channels)[self.order - 1]
        if abs(analytic - lindblad) > FD_CHECK_TOLERANCE * max(1.0, abs(analytic)):
            logger.warning(f"Lindblad finite difference {lindblad:.12g} differs from analytic "
                           f"{analytic:.12g} at r={r:g}, Omega/gamma={omega:g}")
        return (omega, theta, r, self.scale * unitary, self.scale * lindblad,
                self.scale * nonhermitian, formula)

    def build_table(self) -> ResultTable:
        cfg = self.config
        radii = [float(r) for r in np.linspace(0.0, 1.0, cfg.mesh)]
        rows = self.executor.map(lambda point: self.point(*point),
                                 itertools.product(cfg.omega_values, cfg.theta_values, radii))
        return ResultTable(self.template["columns"], rows)

    def plot_spec(self) -> PlotSpec:
        return PlotSpec(x="r", y=["deriv_unitary", "deriv_lindblad", "deriv_nonhermitian", "timescale_formula"],
                        groups=["omega_over_gamma", "theta"])
