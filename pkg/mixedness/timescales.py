#!/usr/bin/env python3
"""
Short-time mixedness timescales.

All coefficients are evaluated by exact operator arithmetic on the initial
state and the two Hermitian parts of H = H1 + iH2:

- single system: 1/T₁ and 1/T₂², with
  S_L(ρ̃_t) ≈ S_L(ρ0) − [d/(d−1)](t/T₁ + t²/T₂²);
- bipartite marginal: 1/T_{1,h}, 1/T_{1,nh}, 1/T²_{2,h}, 1/T²_{2,nh}, with
  the same expansion for S_L(ρ̃ᴬ_t) using the pair sums;
- closed forms for the dissipative qubit, separable pure states under
  sums of local products, and the GHZ mixed state under the XY chain plus
  the all-to-all Ising term.

Coefficients are signed; taking absolute values is left to presentation.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from mixedness.dynamics import central_derivative, normalized_state_at
from mixedness.errors import (
    ComplexResidueError,
    DimensionMismatchError,
    NonHermitianGeneratorError,
    NonPureStateError,
    ParameterRangeError,
)
from mixedness.hamiltonians import NonHermitianHamiltonian, dissipative_qubit, ghz_xy_hamiltonian
from mixedness.linalg_core import (
    anticommutator,
    as_square_matrix,
    commutator,
    expectation,
    is_hermitian,
    partial_trace,
)
from mixedness.states import (
    MAX_SPINS,
    BlochParams,
    DensityMatrix,
    ghz_mixed_state,
    linear_entropy,
    purity,
    qubit_from_bloch,
)

logger = logging.getLogger(__name__)

IMAG_RESIDUE_ATOL = 1e-10

Operand = Union[DensityMatrix, np.ndarray]


def _matrix(a: Operand) -> np.ndarray:
    return a.matrix if isinstance(a, DensityMatrix) else as_square_matrix(a)


def _real(value: complex, what: str) -> float:
    value = complex(value)
    if abs(value.imag) > IMAG_RESIDUE_ATOL * max(1.0, abs(value.real)):
        raise ComplexResidueError(f"{what} has imaginary residue {value.imag:.3e}")
    return value.real


def cov(a: Operand, b: Operand, c: Operand) -> complex:
    """cov_A(B, C) = ½Tr(A{B, C}) − Tr(AB)Tr(AC)."""
    a, b, c = _matrix(a), _matrix(b), _matrix(c)
    if not a.shape == b.shape == c.shape:
        raise DimensionMismatchError(f"covariance operands differ in shape: {a.shape}, {b.shape}, {c.shape}")
    return 0.5 * expectation(a, anticommutator(b, c)) - expectation(a, b) * expectation(a, c)


def _check_operator(rho0: DensityMatrix, op: np.ndarray, name: str) -> np.ndarray:
    op = as_square_matrix(op, name)
    if op.shape != rho0.matrix.shape:
        raise DimensionMismatchError(f"{name} shape {op.shape} does not match state {rho0.matrix.shape}")
    return op


def t1_inverse(rho0: DensityMatrix, h2: np.ndarray) -> float:
    """1/T₁ = 4 cov_ρ0(ρ0, H2)."""
    h2 = _check_operator(rho0, h2, "h2")
    return _real(4.0 * cov(rho0, rho0.matrix, h2), "1/T1")


def t2_inverse_sq(rho0: DensityMatrix, h1: np.ndarray, h2: np.ndarray) -> float:
    """
    1/T₂² = −4f var(H2) − 8⟨H2⟩cov(ρ0, H2) + 8cov(H2, ρ0H2) − 2i cov(ρ0, [H2, H1]),
    every functional taken in ρ0 and f = Tr ρ0².
    """
    h1 = _check_operator(rho0, h1, "h1")
    h2 = _check_operator(rho0, h2, "h2")
    rho = rho0.matrix
    f = purity(rho0)
    mean_h2 = expectation(rho, h2)
    total = (-4.0 * f * cov(rho, h2, h2)
             - 8.0 * mean_h2 * cov(rho, rho, h2)
             + 8.0 * cov(rho, h2, rho @ h2)
             - 2.0j * cov(rho, rho, commutator(h2, h1)))
    return _real(total, "1/T2^2")


class BipartiteCoefficients(NamedTuple):
    """Hermitian (h) and non-Hermitian (nh) parts of the marginal expansion."""
    t1h_inv: float
    t1nh_inv: float
    t2h_inv_sq: float
    t2nh_inv_sq: float

    @property
    def t1_inv(self) -> float:
        return self.t1h_inv + self.t1nh_inv

    @property
    def t2_inv_sq(self) -> float:
        return self.t2h_inv_sq + self.t2nh_inv_sq


@dataclass(frozen=True)
class TimescaleReport:
    """
    Short-time expansion of a linear entropy.

    ``expansion`` holds (c0, c1, c2) of S_L(t) ≈ c0 + c1·t + c2·t² with
    c0 = entropy0, c1 = −[d/(d−1)]/T₁, c2 = −[d/(d−1)]/T₂².
    """

    t1_inv: float
    t2_inv_sq: float
    entropy0: float
    dim: int
    components: Optional[BipartiteCoefficients] = None

    @property
    def expansion(self) -> Tuple[float, float, float]:
        scale = self.dim / (self.dim - 1)
        return self.entropy0, -scale * self.t1_inv, -scale * self.t2_inv_sq

    def predict(self, t):
        """Quadratic predictor; accepts scalars or arrays."""
        c0, c1, c2 = self.expansion
        t = np.asarray(t, dtype=np.float64)
        return c0 + t * (c1 + c2 * t)


def short_time_entropy(rho0: DensityMatrix, h: NonHermitianHamiltonian) -> TimescaleReport:
    return TimescaleReport(
        t1_inv=t1_inverse(rho0, h.h2),
        t2_inv_sq=t2_inverse_sq(rho0, h.h1, h.h2),
        entropy0=linear_entropy(rho0),
        dim=rho0.dim,
    )


def qubit_coefficients(b: BlochParams, omega_over_gamma: float) -> Tuple[float, float]:
    """
    Closed-form (1/(γT₁), 1/(γ²T₂²)) of the dissipative driven qubit.

    1/(γT₁) = ½(1−r²) r cosθ and
    1/(γ²T₂²) = ⅛(1−r²)(1 − 3r²cos²θ + 2(Ω/γ) r sinθ sinφ); the detuning drops out.
    """
    r, ct = b.r, math.cos(b.theta)
    t1 = 0.5 * (1.0 - r * r) * r * ct
    t2 = 0.125 * (1.0 - r * r) * (1.0 - 3.0 * r * r * ct * ct
                                  + 2.0 * omega_over_gamma * r * math.sin(b.theta) * math.sin(b.phi))
    return t1, t2


def qubit_coefficients_from_matrices(b: BlochParams, detuning_over_gamma: float,
                                     omega_over_gamma: float) -> Tuple[float, float]:
    """Same quantities from the generic formulas with γ = 1."""
    rho0 = qubit_from_bloch(b)
    h = dissipative_qubit(detuning_over_gamma, omega_over_gamma, 1.0)
    return t1_inverse(rho0, h.h2), t2_inverse_sq(rho0, h.h1, h.h2)


# ============================================================================
# BIPARTITE SYSTEMS
# ============================================================================

def bipartite_coefficients(rho0: DensityMatrix, dims: Sequence[int], h1: np.ndarray,
                           h2: np.ndarray) -> BipartiteCoefficients:
    """
    Four coefficients of the marginal expansion for subsystem A.

    Args:
        rho0: Joint initial state on A ⊗ B.
        dims: (d_A, d_B).
        h1, h2: Hermitian parts of H on the joint space.

    Raises:
        DimensionMismatchError: If d_A·d_B differs from the state dimension.
    """
    if len(dims) != 2 or dims[0] * dims[1] != rho0.dim:
        raise DimensionMismatchError(f"dims {tuple(dims)} do not factor dimension {rho0.dim}")
    h1 = _check_operator(rho0, h1, "h1")
    h2 = _check_operator(rho0, h2, "h2")
    rho = rho0.matrix

    def tr_b(m: np.ndarray) -> np.ndarray:
        return partial_trace(m, dims, [0])

    rho_a = tr_b(rho)
    f_a = float(np.sum(np.abs(rho_a) ** 2))

    def avg_a(m: np.ndarray) -> complex:
        return expectation(rho_a, m)

    mean_h2 = expectation(rho, h2)
    mean_h2_sq = expectation(rho, h2 @ h2)
    comm_h1 = commutator(rho, h1)          # [ρ, H1]
    anti_h2 = anticommutator(rho, h2)      # {ρ, H2}
    x = tr_b(comm_h1)
    y = tr_b(anti_h2)

    t1h = 2.0j * avg_a(x)
    t1nh = 2.0 * avg_a(y) - 4.0 * f_a * mean_h2
    t2h = -avg_a(tr_b(commutator(comm_h1, h1))) - expectation(x, x)
    t2nh = (avg_a(tr_b(anticommutator(anti_h2, h2))) + expectation(y, y)
            + 1j * avg_a(tr_b(anticommutator(comm_h1, h2)))
            + 1j * avg_a(tr_b(commutator(anti_h2, h1)))
            - 8.0 * mean_h2 * (avg_a(y) + 1j * avg_a(x))
            + 2.0 * f_a * (1j * expectation(rho, commutator(h2, h1)) - 2.0 * (mean_h2_sq - 3.0 * mean_h2 ** 2))
            + 2.0j * expectation(x, y))
    return BipartiteCoefficients(
        _real(t1h, "1/T1,h"), _real(t1nh, "1/T1,nh"),
        _real(t2h, "1/T2,h^2"), _real(t2nh, "1/T2,nh^2"),
    )


def short_time_entropy_bipartite(rho0: DensityMatrix, dims: Sequence[int],
                                 h: NonHermitianHamiltonian) -> TimescaleReport:
    coefficients = bipartite_coefficients(rho0, dims, h.h1, h.h2)
    marginal = DensityMatrix(partial_trace(rho0.matrix, dims, [0]))
    return TimescaleReport(
        t1_inv=coefficients.t1_inv,
        t2_inv_sq=coefficients.t2_inv_sq,
        entropy0=linear_entropy(marginal),
        dim=int(dims[0]),
        components=coefficients,
    )


def marginal_purity_derivatives_fd(rho0: DensityMatrix, dims: Sequence[int], h: NonHermitianHamiltonian,
                                   step: Optional[float] = None) -> Tuple[float, float]:
    """Finite-difference (f_A'(0), f_A''(0)) along the closed-form flow."""
    if step is None:
        step = 1e-3 / max(float(np.linalg.norm(h.matrix, 2)), 1e-12)

    def marginal_purity(t: float) -> float:
        rho_a = partial_trace(normalized_state_at(rho0.matrix, h, t), dims, [0])
        return float(np.sum(np.abs(rho_a) ** 2))

    return central_derivative(marginal_purity, step, 1), central_derivative(marginal_purity, step, 2)


def audit_bipartite_coefficients(rho0: DensityMatrix, dims: Sequence[int], h: NonHermitianHamiltonian,
                                 rtol: float = 1e-5, atol: float = 1e-7) -> bool:
    """
    Compare the coefficient sums with finite differences of the marginal purity.

    Disagreements are logged at warning level; nothing is corrected.
    """
    c = bipartite_coefficients(rho0, dims, h.h1, h.h2)
    first, second = marginal_purity_derivatives_fd(rho0, dims, h)
    ok = True
    for label, analytic, numeric in (("first", c.t1_inv, first), ("second", c.t2_inv_sq, 0.5 * second)):
        if not math.isclose(analytic, numeric, rel_tol=rtol, abs_tol=atol):
            logger.warning(f"{label}-order marginal coefficient {analytic:.12g} "
                           f"disagrees with finite difference {numeric:.12g}")
            ok = False
    return ok


def _local_moments(rho: np.ndarray, ops_k: Sequence[np.ndarray], ops_l: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix of ⟨X_k Y_l⟩ − ⟨X_k⟩⟨Y_l⟩ in the state rho."""
    means_k = [expectation(rho, a) for a in ops_k]
    means_l = [expectation(rho, b) for b in ops_l]
    out = np.empty((len(ops_k), len(ops_l)), dtype=np.complex128)
    for i, a in enumerate(ops_k):
        for j, b in enumerate(ops_l):
            out[i, j] = expectation(rho, a @ b) - means_k[i] * means_l[j]
    return out


def separable_pure_coefficients(rho_a: DensityMatrix, rho_b: DensityMatrix,
                                h1_terms: Sequence[Tuple[np.ndarray, np.ndarray]],
                                h2_terms: Sequence[Tuple[np.ndarray, np.ndarray]]) -> Tuple[float, float]:
    """
    (1/T²_{2,h}, 1/T²_{2,nh}) for ρ_A ⊗ ρ_B with pure factors and
    H1 = Σ A_n ⊗ B_n, H2 = Σ C_n ⊗ D_n; both first-order terms vanish here.

    Raises:
        NonPureStateError: If either factor is mixed.
        NonHermitianGeneratorError: If a local operator is not Hermitian.
    """
    for name, rho in (("rho_a", rho_a), ("rho_b", rho_b)):
        if not rho.is_pure():
            raise NonPureStateError(f"{name} must be pure")
    a_ops = [as_square_matrix(a) for a, _ in h1_terms]
    b_ops = [as_square_matrix(b) for _, b in h1_terms]
    c_ops = [as_square_matrix(c) for c, _ in h2_terms]
    d_ops = [as_square_matrix(d) for _, d in h2_terms]
    for op in a_ops + b_ops + c_ops + d_ops:
        if not is_hermitian(op):
            raise NonHermitianGeneratorError("local operators must be Hermitian")

    ra, rb = rho_a.matrix, rho_b.matrix
    t2h = -2.0 * np.sum(_local_moments(ra, a_ops, a_ops) * _local_moments(rb, b_ops, b_ops)) if a_ops else 0.0
    t2nh = 0.0
    if c_ops:
        t2nh = -2.0 * np.sum(_local_moments(ra, c_ops, c_ops) * _local_moments(rb, d_ops, d_ops))
        if a_ops:
            t2nh = t2nh + 4.0 * np.sum(_local_moments(ra, a_ops, c_ops) * _local_moments(rb, b_ops, d_ops)).imag
    return _real(t2h, "1/T2,h^2"), _real(t2nh, "1/T2,nh^2")


# ============================================================================
# GHZ MIXED STATE UNDER XY + ALL-TO-ALL ISING
# ============================================================================

def _check_ghz_params(n: int, k: int, p: float) -> None:
    if not 2 <= k < n <= MAX_SPINS:
        raise ParameterRangeError(f"need 2 <= k < N <= {MAX_SPINS}, got N={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"mixing parameter p={p} outside [0, 1]")


def ghz_xy_coefficients(n: int, k: int, p: float, coupling: float, anisotropy: float,
                        ising_coupling: float, printed: bool = False) -> Tuple[float, float, float]:
    """
    Closed-form (1/T_{1,nh}, 1/T²_{2,h}, 1/T²_{2,nh}) for the first k of N
    sites, at zero transverse field; 1/T_{1,h} vanishes identically.

    With q = k(k−1), G = N(N−1), m = 2^{k−1} − 1:

    - 1/T_{1,nh} = Jz p(1−p)/(2^{k−1}N)·(q + G·m·p), non-negative for Jz ≥ 0;
    - 1/T²_{2,h} = (δ_{d_B,2} − 1)γ²J²p²;
    - 1/T²_{2,nh} = Jz²/(2^k N²)·Σ_j c_j p^j, a quartic vanishing at p = 1.

    Args:
        printed: Use the alternative normalization of the non-Hermitian terms
            (negative first-order sign, doubled second-order prefactor). Kept
            for comparison only; it does not match bipartite_coefficients.
    """
    _check_ghz_params(n, k, p)
    q = k * (k - 1)
    g = n * (n - 1)
    m = 2 ** (k - 1) - 1
    kappa = k ** 4 - 6 * k ** 3 + k ** 2 + 4 * k

    t1nh = ising_coupling * p * (1.0 - p) / (2 ** (k - 1) * n) * (q + g * m * p)

    d_b = 2 ** (n - k)
    t2h = ((1.0 if d_b == 2 else 0.0) - 1.0) * anisotropy ** 2 * coupling ** 2 * p ** 2

    c0 = 2 * q
    c1 = kappa + 2 * q * (n * n + n - 1)
    c2 = -(kappa + 2 * n * q * (3 * n - 1) - 2 * m * n * (n ** 3 - 2 * n ** 2 + 1))
    c3 = -g * (m * (5 * g - 2) - 4 * q)
    c4 = 3 * g * g * m
    poly = c0 + p * (c1 + p * (c2 + p * (c3 + p * c4)))
    t2nh = ising_coupling ** 2 / (2 ** k * n * n) * poly

    if printed:
        t1nh, t2nh = -t1nh, 2.0 * t2nh
    return t1nh, t2h, t2nh


def ghz_h2_moments(n: int, ising_coupling: float, p: float) -> Tuple[float, float]:
    """(⟨H2⟩, ⟨H2²⟩) of the all-to-all Ising term in the GHZ mixed state."""
    mean = 0.5 * ising_coupling * (n - 1) * p
    second = ising_coupling ** 2 * (n - 1) / (4.0 * n) * (2.0 + (n - 2) * (n + 1) * p)
    return mean, second


def check_ghz_closed_forms(n: int, k: int, p: float, coupling: float, anisotropy: float,
                           ising_coupling: float, atol: float = 1e-10) -> Dict[str, Dict[str, float]]:
    """
    Evaluate the closed forms and the generic coefficients side by side.

    Every disagreement above ``atol`` is logged at warning level.

    Returns:
        {"closed": {...}, "generic": {...}} keyed by coefficient name.
    """
    _check_ghz_params(n, k, p)
    rho0 = ghz_mixed_state(n, p)
    h = ghz_xy_hamiltonian(n, coupling, anisotropy, ising_coupling)
    generic = bipartite_coefficients(rho0, (2 ** k, 2 ** (n - k)), h.h1, h.h2)
    t1nh, t2h, t2nh = ghz_xy_coefficients(n, k, p, coupling, anisotropy, ising_coupling)
    closed = {"t1h_inv": 0.0, "t1nh_inv": t1nh, "t2h_inv_sq": t2h, "t2nh_inv_sq": t2nh}
    generic_map = generic._asdict()
    for name, value in closed.items():
        if abs(value - generic_map[name]) > atol:
            logger.warning(f"closed form {name}={value:.12g} differs from generic "
                           f"{generic_map[name]:.12g} (N={n}, k={k}, p={p})")
    return {"closed": closed, "generic": dict(generic_map)}
