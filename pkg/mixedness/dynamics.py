#!/usr/bin/env python3
"""
Evolution engines.

- Normalized non-Hermitian flow ρ̃_t = U_t ρ0 U_t† / Tr(U_t ρ0 U_t†), U_t = e^{−itH}.
- Lindblad master equation with explicit jump channels.
- Reduced (marginal) trajectories of a bipartite evolution.
- Metric evolution of a pure state, with G_t solving dG/dt = i(G H − H† G).

The closed-form engines propagate with matrix exponentials; the RK4 engines
exist as independent oracles and renormalize and Hermitize after every step.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from mixedness.errors import (
    DimensionMismatchError,
    IntegratorError,
    MetricPositivityError,
    NormCollapseError,
    ParameterRangeError,
    ValidationError,
)
from mixedness.hamiltonians import JumpChannel, NonHermitianHamiltonian, effective_from_jumps
from mixedness.linalg_core import (
    anticommutator,
    as_square_matrix,
    commutator,
    dagger,
    expectation,
    hermitize,
    is_hermitian,
    matrix_exponential,
    partial_trace,
)
from mixedness.states import DensityMatrix, linear_entropy, purity

logger = logging.getLogger(__name__)

NORM_FLOOR = 1e-12
METRIC_FLOOR = 1e-12
LINDBLAD_TRACE_ATOL = 1e-9
RK4_TOLERANCE = 1e-8
RK4_BASE_STEP = 1e-3  # in units of 1/‖H‖
RK4_MAX_HALVINGS = 10


class EvolutionLaw(Enum):
    """Which equation of motion produced a trajectory."""
    NONHERMITIAN_NORMALIZED = "nonhermitian_normalized"
    LINDBLAD = "lindblad"
    METRIC = "metric"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Time grid plus one validated state per grid point.

    Attributes:
        times: Ascending grid starting at 0.
        states: DensityMatrix snapshots, states[i] at times[i].
        law: Evolution law that produced the snapshots.
    """

    times: np.ndarray
    states: Tuple[DensityMatrix, ...]
    law: EvolutionLaw

    def __post_init__(self):
        times = validate_time_grid(self.times)
        states = tuple(self.states)
        if len(states) != len(times):
            raise ValidationError(f"{len(states)} states for {len(times)} time points")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.times)

    def purities(self) -> np.ndarray:
        return np.array([purity(s) for s in self.states])

    def linear_entropies(self) -> np.ndarray:
        return np.array([linear_entropy(s) for s in self.states])


@dataclass(frozen=True, eq=False)
class MetricTrajectory(Trajectory):
    """
    Metric evolution of a pure state.

    ``states`` hold the Hermitian projectors onto the evolved ray. The metric
    operators G_t and the metric-normalized operators
    R_t = |ψ_t⟩⟨ψ_t|G_t / ⟨ψ_t|G_t|ψ_t⟩ (not Hermitian in general) are kept
    alongside.
    """

    metrics: Tuple[np.ndarray, ...] = ()
    metric_states: Tuple[np.ndarray, ...] = ()

    def metric_purities(self) -> np.ndarray:
        """Tr(R_t²) for every snapshot."""
        return np.array([np.trace(r @ r).real for r in self.metric_states])


def validate_time_grid(times: Sequence[float]) -> np.ndarray:
    """
    Check a time grid: 1-D, finite, starting at 0 and strictly ascending.

    Raises:
        ParameterRangeError: If any condition fails.
    """
    grid = np.asarray(times, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterRangeError("time grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(grid)):
        raise ParameterRangeError("time grid contains non-finite values")
    if grid[0] != 0.0:
        raise ParameterRangeError(f"time grid must start at 0, got {grid[0]}")
    if grid.size > 1 and np.any(np.diff(grid) <= 0.0):
        raise ParameterRangeError("time grid must be strictly ascending")
    return grid


def _is_uniform(times: np.ndarray) -> bool:
    if times.size < 3:
        return False
    steps = np.diff(times)
    return bool(np.allclose(steps, steps[0], rtol=1e-12, atol=0.0))


class Propagator:
    """
    exp(t·A) for a fixed generator A on arbitrary times.

    Hermitian and skew-Hermitian generators are diagonalized once with eigh.
    Other generators use a one-off eig when its eigenvector matrix is well
    conditioned; otherwise uniform grids are stepped with a single
    exponential of the step and non-uniform grids fall back to one Padé
    exponential per time point.
    """

    def __init__(self, generator: np.ndarray, max_condition: float = 1e4):
        self.generator = as_square_matrix(generator, "generator")
        self.dim = self.generator.shape[0]
        self._spectral: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None

        if is_hermitian(1j * self.generator):
            w, v = np.linalg.eigh(hermitize(1j * self.generator))
            self._spectral = (-1j * w, v, dagger(v))
        elif is_hermitian(self.generator):
            w, v = np.linalg.eigh(hermitize(self.generator))
            self._spectral = (w.astype(np.complex128), v, dagger(v))
        else:
            w, v = np.linalg.eig(self.generator)
            condition = np.linalg.cond(v)
            if np.isfinite(condition) and condition <= max_condition:
                self._spectral = (w, v, np.linalg.inv(v))
            else:
                logger.debug(f"eigenvector condition {condition:.3e} too large; using exponentials")

    def at(self, t: float) -> np.ndarray:
        if t == 0.0:
            return np.eye(self.dim, dtype=np.complex128)
        if self._spectral is not None:
            w, v, v_inv = self._spectral
            return (v * np.exp(t * w)) @ v_inv
        return matrix_exponential(t * self.generator)

    def on_grid(self, times: np.ndarray) -> Iterator[np.ndarray]:
        if self._spectral is None and _is_uniform(times) and times[0] == 0.0:
            step = matrix_exponential((times[1] - times[0]) * self.generator)
            current = np.eye(self.dim, dtype=np.complex128)
            yield current
            for _ in range(len(times) - 1):
                current = step @ current
                yield current
            return
        for t in times:
            yield self.at(float(t))


def _check_dims(rho: np.ndarray, h: np.ndarray) -> None:
    if rho.shape != h.shape:
        raise DimensionMismatchError(f"state shape {rho.shape} does not match Hamiltonian {h.shape}")


# ============================================================================
# NORMALIZED NON-HERMITIAN FLOW
# ============================================================================

def normalized_rhs(rho: np.ndarray, h: NonHermitianHamiltonian) -> np.ndarray:
    """dρ/dt = −i[H1, ρ] + {H2, ρ} − 2 Tr(ρH2) ρ."""
    return (-1j * commutator(h.h1, rho) + anticommutator(h.h2, rho)
            - 2.0 * expectation(rho, h.h2).real * rho)


def normalized_second_derivative(rho: np.ndarray, rho_dot: np.ndarray,
                                 h: NonHermitianHamiltonian) -> np.ndarray:
    """Time derivative of normalized_rhs along the flow."""
    mean_h2 = expectation(rho, h.h2).real
    return (-1j * commutator(h.h1, rho_dot) + anticommutator(h.h2, rho_dot)
            - 2.0 * expectation(rho_dot, h.h2).real * rho - 2.0 * mean_h2 * rho_dot)


def _normalize(m: np.ndarray, t: float) -> np.ndarray:
    trace = np.trace(m).real
    if trace <= NORM_FLOOR:
        raise NormCollapseError(f"propagated trace {trace:.3e} fell below {NORM_FLOOR:g} at t={t:g}")
    return hermitize(m) / trace


def normalized_state_at(rho0: np.ndarray, h: NonHermitianHamiltonian, t: float) -> np.ndarray:
    """Unvalidated ρ̃_t for a single time; negative t is allowed (finite differences)."""
    u = Propagator(-1j * h.matrix).at(t)
    return _normalize(u @ rho0 @ dagger(u), t)


def evolve_normalized(rho0: DensityMatrix, h: NonHermitianHamiltonian,
                      times: Sequence[float]) -> Trajectory:
    """
    Closed-form normalized non-Hermitian evolution.

    Args:
        rho0: Initial state.
        h: Generator H = h1 + i·h2.
        times: Ascending grid starting at 0.

    Returns:
        Trajectory of ρ̃_t = U_t ρ0 U_t† / Tr(U_t ρ0 U_t†).

    Raises:
        NormCollapseError: If Tr(U_t ρ0 U_t†) drops to 1e-12 or below.
    """
    _check_dims(rho0.matrix, h.h1)
    grid = validate_time_grid(times)
    propagator = Propagator(-1j * h.matrix)
    states: List[DensityMatrix] = []
    for t, u in zip(grid, propagator.on_grid(grid)):
        if t == 0.0:
            states.append(rho0)
            continue
        m = _normalize(u @ rho0.matrix @ dagger(u), float(t))
        states.append(DensityMatrix(m, rho0.dims))
    return Trajectory(grid, tuple(states), EvolutionLaw.NONHERMITIAN_NORMALIZED)


# ============================================================================
# RK4 ORACLE
# ============================================================================

def rk4_step(rhs: Callable[[np.ndarray], np.ndarray], y: np.ndarray, dt: float) -> np.ndarray:
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * dt * k1)
    k3 = rhs(y + 0.5 * dt * k2)
    k4 = rhs(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_rk4(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, times: np.ndarray,
                  dt: float, renormalize: bool) -> List[np.ndarray]:
    """
    Fixed-step RK4 reporting at the grid points.

    Each grid interval is split into the fewest equal substeps no longer than
    dt. After every substep the state is Hermitized and, if requested,
    renormalized to unit trace.
    """
    y = np.array(y0, dtype=np.complex128)
    out = [y.copy()]
    for t0, t1 in zip(times[:-1], times[1:]):
        n_sub = max(1, int(math.ceil((t1 - t0) / dt - 1e-9)))
        h = (t1 - t0) / n_sub
        for _ in range(n_sub):
            y = hermitize(rk4_step(rhs, y, h))
            if renormalize:
                y = _normalize(y, float(t1))
        if not np.all(np.isfinite(y)):
            raise IntegratorError(f"RK4 produced non-finite entries near t={t1:g}")
        out.append(y.copy())
    return out


def _energy_scale(h: np.ndarray) -> float:
    return max(float(np.linalg.norm(h, 2)), 1e-12)


def _rk4_until_converged(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, grid: np.ndarray,
                         dt: float, renormalize: bool, tolerance: float) -> List[np.ndarray]:
    previous = integrate_rk4(rhs, y0, grid, dt, renormalize)
    for _ in range(RK4_MAX_HALVINGS):
        dt *= 0.5
        current = integrate_rk4(rhs, y0, grid, dt, renormalize)
        change = max(np.linalg.norm(a - b) for a, b in zip(previous, current))
        logger.debug(f"RK4 halving to dt={dt:.3e}: change {change:.3e}")
        if change < tolerance:
            return current
        previous = current
    raise IntegratorError(f"RK4 did not converge to {tolerance:g} after {RK4_MAX_HALVINGS} halvings")


def evolve_normalized_rk4(rho0: DensityMatrix, h: NonHermitianHamiltonian, times: Sequence[float],
                          dt: Optional[float] = None, tolerance: float = RK4_TOLERANCE) -> Trajectory:
    """RK4 integration of the normalized equation of motion, halving dt until converged."""
    _check_dims(rho0.matrix, h.h1)
    grid = validate_time_grid(times)
    step = dt if dt is not None else RK4_BASE_STEP / _energy_scale(h.matrix)
    mats = _rk4_until_converged(lambda r: normalized_rhs(r, h), rho0.matrix, grid, step, True, tolerance)
    states = [rho0] + [DensityMatrix(m, rho0.dims) for m in mats[1:]]
    return Trajectory(grid, tuple(states), EvolutionLaw.NONHERMITIAN_NORMALIZED)


# ============================================================================
# LINDBLAD MASTER EQUATION
# ============================================================================

def liouvillian(h: np.ndarray, channels: Sequence[JumpChannel]) -> np.ndarray:
    """
    Superoperator of dρ/dt = −i(H_eff ρ − ρ H_eff†) + Σ γ L ρ L† acting on
    row-major vec(ρ).
    """
    h_eff = effective_from_jumps(h, channels).matrix
    eye = np.eye(h_eff.shape[0], dtype=np.complex128)
    out = -1j * np.kron(h_eff, eye) + 1j * np.kron(eye, h_eff.conj())
    for channel in channels:
        out = out + channel.rate * np.kron(channel.operator, channel.operator.conj())
    return out


def lindblad_rhs(rho: np.ndarray, h: np.ndarray, channels: Sequence[JumpChannel]) -> np.ndarray:
    h_eff = effective_from_jumps(h, channels).matrix
    out = -1j * (h_eff @ rho - rho @ dagger(h_eff))
    for channel in channels:
        out = out + channel.rate * (channel.operator @ rho @ dagger(channel.operator))
    return out


def lindblad_state_at(rho0: np.ndarray, h: np.ndarray, channels: Sequence[JumpChannel], t: float) -> np.ndarray:
    """Unvalidated Lindblad state at one time; negative t is allowed (finite differences)."""
    d = rho0.shape[0]
    vec = Propagator(liouvillian(h, channels)).at(t) @ rho0.reshape(-1)
    return hermitize(vec.reshape(d, d))


def evolve_lindblad(rho0: DensityMatrix, h: np.ndarray, channels: Sequence[JumpChannel],
                    times: Sequence[float], engine: str = "exact",
                    dt: Optional[float] = None) -> Trajectory:
    """
    Lindblad evolution with jumps kept.

    Args:
        rho0: Initial state.
        h: Hermitian Hamiltonian.
        channels: Jump channels (rate, operator).
        times: Ascending grid starting at 0.
        engine: "exact" (Liouvillian exponential) or "rk4".
        dt: RK4 base step; defaults to 1e-3 over the generator scale.

    Raises:
        IntegratorError: If the integrator fails or trace drifts by more than 1e-9.
    """
    h = as_square_matrix(h, "H")
    _check_dims(rho0.matrix, h)
    grid = validate_time_grid(times)
    d = rho0.dim

    if engine == "exact":
        propagator = Propagator(liouvillian(h, channels))
        vec0 = rho0.matrix.reshape(-1)
        mats = [hermitize((u @ vec0).reshape(d, d)) for u in propagator.on_grid(grid)]
    elif engine == "rk4":
        scale = _energy_scale(h) + sum(c.rate * float(np.linalg.norm(c.operator, 2)) ** 2 for c in channels)
        step = dt if dt is not None else RK4_BASE_STEP / scale
        mats = _rk4_until_converged(lambda r: lindblad_rhs(r, h, channels), rho0.matrix, grid,
                                    step, False, RK4_TOLERANCE)
    else:
        raise ParameterRangeError(f"unknown Lindblad engine '{engine}'")

    states: List[DensityMatrix] = [rho0]
    for t, m in zip(grid[1:], mats[1:]):
        drift = abs(np.trace(m).real - 1.0)
        if drift > LINDBLAD_TRACE_ATOL:
            raise IntegratorError(f"Lindblad trace drifted by {drift:.3e} at t={t:g}")
        states.append(DensityMatrix(m, rho0.dims))
    return Trajectory(grid, tuple(states), EvolutionLaw.LINDBLAD)


def lindblad_purity_derivatives(rho0: DensityMatrix, h: np.ndarray,
                                channels: Sequence[JumpChannel]) -> Tuple[float, float]:
    """Analytic (f'(0), f''(0)) of the purity along the Lindblad flow."""
    h = as_square_matrix(h, "H")
    _check_dims(rho0.matrix, h)
    rho = rho0.matrix
    rho_dot = lindblad_rhs(rho, h, channels)
    rho_ddot = lindblad_rhs(rho_dot, h, channels)
    first = 2.0 * expectation(rho, rho_dot).real
    second = 2.0 * expectation(rho, rho_ddot).real + 2.0 * expectation(rho_dot, rho_dot).real
    return first, second


# ============================================================================
# REDUCED DYNAMICS
# ============================================================================

def reduced_trajectory(traj: Trajectory, dims: Sequence[int], keep: Sequence[int]) -> Trajectory:
    """Snapshot-wise partial trace onto the subsystems in ``keep`` (0-based)."""
    kept_dims = tuple(int(dims[i]) for i in sorted(set(keep)))
    marginals = [DensityMatrix(partial_trace(s.matrix, dims, keep), kept_dims) for s in traj.states]
    return Trajectory(traj.times, tuple(marginals), traj.law)


def reduced_generator(rho: DensityMatrix, h: NonHermitianHamiltonian, dims: Sequence[int],
                      keep: Sequence[int]) -> np.ndarray:
    """
    Right side of the marginal equation of motion,
    −i Tr_B[H1, ρ] + Tr_B{H2, ρ} − 2⟨H2⟩ ρ^A.
    """
    _check_dims(rho.matrix, h.h1)
    return partial_trace(normalized_rhs(rho.matrix, h), dims, keep)


# ============================================================================
# METRIC EVOLUTION
# ============================================================================

def metric_operator(h: NonHermitianHamiltonian, t: float) -> np.ndarray:
    """G_t = U_t^{−†} U_t^{−1} with U_t = e^{−itH}; solves dG/dt = i(GH − H†G), G_0 = I."""
    v = Propagator(1j * h.matrix).at(t)
    return dagger(v) @ v


def evolve_metric(psi0: Sequence[complex], h: NonHermitianHamiltonian,
                  times: Sequence[float]) -> MetricTrajectory:
    """
    Evolve a pure state together with its metric operator.

    Args:
        psi0: Unit vector.
        h: Generator H = h1 + i·h2.
        times: Ascending grid starting at 0.

    Returns:
        MetricTrajectory with the ray projectors as states, plus G_t and R_t.

    Raises:
        ValidationError: If psi0 is not normalized.
        MetricPositivityError: If G_t has an eigenvalue below 1e-12.
    """
    psi0 = np.asarray(psi0, dtype=np.complex128).reshape(-1)
    if psi0.shape[0] != h.dim:
        raise DimensionMismatchError(f"state length {psi0.shape[0]} does not match dimension {h.dim}")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValidationError("initial vector must be normalized")
    grid = validate_time_grid(times)

    forward = Propagator(-1j * h.matrix)
    backward = Propagator(1j * h.matrix)
    states: List[DensityMatrix] = []
    metrics: List[np.ndarray] = []
    metric_states: List[np.ndarray] = []
    for t, u, v in zip(grid, forward.on_grid(grid), backward.on_grid(grid)):
        g = hermitize(dagger(v) @ v)
        lowest = float(np.linalg.eigvalsh(g)[0])
        if lowest < METRIC_FLOOR:
            raise MetricPositivityError(f"metric eigenvalue {lowest:.3e} at t={t:g}")
        psi = u @ psi0
        bra = psi.conj() @ g
        norm = (bra @ psi).real
        metrics.append(g)
        metric_states.append(np.outer(psi, bra) / norm)
        states.append(DensityMatrix.from_ket(psi))
    return MetricTrajectory(grid, tuple(states), EvolutionLaw.METRIC,
                            metrics=tuple(metrics), metric_states=tuple(metric_states))


# ============================================================================
# PURITY DERIVATIVES
# ============================================================================

def purity_derivatives(rho0: DensityMatrix, h: NonHermitianHamiltonian, order: int) -> float:
    """
    n-th time derivative of Tr(ρ̃_t²) at t = 0 from the Leibniz sum
    f⁽ⁿ⁾ = Σ_k C(n, k) Tr(ρ⁽ᵏ⁾ ρ⁽ⁿ⁻ᵏ⁾), with ρ⁽ᵏ⁾ from the equation of motion.

    Order 1 equals 1/T₁, order 2 equals 2/T₂².
    """
    if order not in (1, 2):
        raise ParameterRangeError(f"order must be 1 or 2, got {order}")
    _check_dims(rho0.matrix, h.h1)
    derivs = [rho0.matrix, normalized_rhs(rho0.matrix, h)]
    if order == 2:
        derivs.append(normalized_second_derivative(derivs[0], derivs[1], h))
    total = sum(math.comb(order, k) * expectation(derivs[k], derivs[order - k]) for k in range(order + 1))
    return float(total.real)


def central_derivative(fn: Callable[[float], float], step: float, order: int) -> float:
    """
    Richardson-extrapolated central difference of fn at 0.

    Combines the three-point stencils at step and step/2, which equals the
    five-point stencil with spacing step/2.
    """
    if order not in (1, 2):
        raise ParameterRangeError(f"order must be 1 or 2, got {order}")
    h = 0.5 * step
    f_m2, f_m1, f_0, f_p1, f_p2 = (fn(k * h) for k in (-2, -1, 0, 1, 2))
    if order == 1:
        return (-f_p2 + 8.0 * f_p1 - 8.0 * f_m1 + f_m2) / (12.0 * h)
    return (-f_p2 + 16.0 * f_p1 - 30.0 * f_0 + 16.0 * f_m1 - f_m2) / (12.0 * h * h)
