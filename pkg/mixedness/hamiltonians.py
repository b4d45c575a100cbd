#!/usr/bin/env python3
"""
Hamiltonian builders and the non-Hermitian Hamiltonian container.

Spin sites are numbered 1..N with site 1 the outermost tensor factor. A
subsystem made of the first k sites is therefore the leading factor of the
Kronecker product, which is what the bipartite coefficients assume.
"""

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sparse

from mixedness.errors import DimensionMismatchError, ParameterRangeError, ValidationError
from mixedness.linalg_core import (
    HERMITIAN_ATOL,
    ComplexMatrix,
    as_square_matrix,
    dagger,
    hermitian_split,
    hermitize,
)
from mixedness.states import MAX_SPINS


# ============================================================================
# SINGLE-QUBIT OPERATORS
# ============================================================================

IDENTITY_2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PROJECTOR_1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)
LOWERING = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |0⟩⟨1|

PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
_SPARSE_PAULI = {label: sparse.csr_matrix(op) for label, op in PAULI.items()}


@dataclass(frozen=True, eq=False)
class NonHermitianHamiltonian:
    """
    H = h1 + i·h2 with h1 and h2 Hermitian.

    Attributes:
        h1: Hermitian part (energy units).
        h2: Anti-Hermitian part divided by i (energy units).
    """

    h1: np.ndarray
    h2: np.ndarray

    def __post_init__(self):
        h1 = as_square_matrix(self.h1, "h1")
        h2 = as_square_matrix(self.h2, "h2")
        if h1.shape != h2.shape:
            raise DimensionMismatchError(f"h1 {h1.shape} and h2 {h2.shape} differ in shape")
        for name, h in (("h1", h1), ("h2", h2)):
            scale = max(1.0, float(np.max(np.abs(h))))
            if np.max(np.abs(h - dagger(h))) > HERMITIAN_ATOL * scale:
                raise ValidationError(f"{name} is not Hermitian")
        h1 = hermitize(h1)
        h2 = hermitize(h2)
        h1.setflags(write=False)
        h2.setflags(write=False)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    @classmethod
    def from_matrix(cls, h: ComplexMatrix) -> "NonHermitianHamiltonian":
        return cls(*hermitian_split(h))

    @classmethod
    def hermitian(cls, h: ComplexMatrix) -> "NonHermitianHamiltonian":
        h = as_square_matrix(h)
        return cls(h, np.zeros_like(h))

    @property
    def dim(self) -> int:
        return self.h1.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """The full generator h1 + i·h2."""
        return self.h1 + 1j * self.h2

    @property
    def is_hermitian(self) -> bool:
        return bool(np.max(np.abs(self.h2)) == 0.0)


@dataclass(frozen=True, eq=False)
class JumpChannel:
    """A Lindblad dissipator γ·(LρL† − ½{L†L, ρ})."""

    rate: float
    operator: np.ndarray

    def __post_init__(self):
        if self.rate < 0.0:
            raise ParameterRangeError(f"jump rate {self.rate} must be nonnegative")
        object.__setattr__(self, "operator", as_square_matrix(self.operator, "jump operator"))


# ============================================================================
# TWO-LEVEL SYSTEM
# ============================================================================

def driven_qubit(detuning: float, coupling: float) -> np.ndarray:
    """H = Δ|1⟩⟨1| + (Ω/2)(|0⟩⟨1| + |1⟩⟨0|)."""
    return detuning * PROJECTOR_1 + 0.5 * coupling * SIGMA_X


def decay_channel(gamma: float) -> JumpChannel:
    """Spontaneous decay |1⟩ → |0⟩ at rate γ."""
    return JumpChannel(gamma, LOWERING)


def effective_from_jumps(h: ComplexMatrix, channels: Sequence[JumpChannel]) -> NonHermitianHamiltonian:
    """
    Effective generator obtained by discarding quantum jumps.

    Returns:
        h1 = H, h2 = −Σ (γ/2) L†L.

    Raises:
        DimensionMismatchError: If a jump operator does not match H.
    """
    h = as_square_matrix(h, "H")
    h2 = np.zeros_like(h)
    for channel in channels:
        op = channel.operator
        if op.shape != h.shape:
            raise DimensionMismatchError(f"jump operator shape {op.shape} does not match H {h.shape}")
        h2 = h2 - 0.5 * channel.rate * (dagger(op) @ op)
    return NonHermitianHamiltonian(h, h2)


def dissipative_qubit(detuning: float, coupling: float, gamma: float) -> NonHermitianHamiltonian:
    """Driven qubit with decay, jumps discarded: h2 = −(γ/2)|1⟩⟨1|."""
    return effective_from_jumps(driven_qubit(detuning, coupling), [decay_channel(gamma)])


# ============================================================================
# SPIN CHAINS
# ============================================================================

def _check_spins(n: int) -> None:
    if not 2 <= n <= MAX_SPINS:
        raise ParameterRangeError(f"N={n} outside [2, {MAX_SPINS}]")


def _sparse_pauli_string(n: int, factors: Mapping[int, str]) -> sparse.csr_matrix:
    for site, label in factors.items():
        if not 1 <= site <= n:
            raise ParameterRangeError(f"site {site} outside [1, {n}]")
        if label not in _SPARSE_PAULI:
            raise ParameterRangeError(f"unknown Pauli label '{label}' at site {site}")
    out = sparse.identity(1, dtype=np.complex128, format="csr")
    run = 0
    for site in range(1, n + 1):
        if site in factors:
            if run:
                out = sparse.kron(out, sparse.identity(2 ** run, dtype=np.complex128), format="csr")
                run = 0
            out = sparse.kron(out, _SPARSE_PAULI[factors[site]], format="csr")
        else:
            run += 1
    if run:
        out = sparse.kron(out, sparse.identity(2 ** run, dtype=np.complex128), format="csr")
    return out


def pauli_string(n: int, factors: Mapping[int, str]) -> np.ndarray:
    """
    Dense σ-string on n qubits.

    Args:
        n: Number of sites.
        factors: Map from 1-based site to 'x', 'y' or 'z'; other sites get I.

    Raises:
        ParameterRangeError: For a site outside [1, n] or an unknown label.
    """
    return _sparse_pauli_string(n, factors).toarray()


def xy_chain(n: int, coupling: float, anisotropy: float, field: float) -> np.ndarray:
    """
    Open-boundary transverse-field XY chain.

    H = −J Σ_{j<N} (γ₊ σˣ_j σˣ_{j+1} + γ₋ σʸ_j σʸ_{j+1}) − h Σ_j σᶻ_j,
    with γ± = (1 ± anisotropy)/2.
    """
    _check_spins(n)
    if not -1.0 <= anisotropy <= 1.0:
        raise ParameterRangeError(f"anisotropy {anisotropy} outside [-1, 1]")
    g_plus = 0.5 * (1.0 + anisotropy)
    g_minus = 0.5 * (1.0 - anisotropy)
    d = 2 ** n
    h = sparse.csr_matrix((d, d), dtype=np.complex128)
    for j in range(1, n):
        if g_plus:
            h = h - coupling * g_plus * _sparse_pauli_string(n, {j: "x", j + 1: "x"})
        if g_minus:
            h = h - coupling * g_minus * _sparse_pauli_string(n, {j: "y", j + 1: "y"})
    if field:
        for j in range(1, n + 1):
            h = h - field * _sparse_pauli_string(n, {j: "z"})
    return h.toarray()


def ising_all_to_all(n: int, coupling: float) -> np.ndarray:
    """
    Fully connected Ising term (Jz/N) Σ_{j<l} σᶻ_j σᶻ_l.

    Diagonal in the computational basis; with magnetization M = Σ_j s_j the
    pair sum equals (M² − N)/2.
    """
    _check_spins(n)
    index = np.arange(2 ** n)
    ones = np.zeros(2 ** n, dtype=np.int64)
    for bit in range(n):
        ones += (index >> bit) & 1
    magnetization = n - 2 * ones
    energies = coupling / n * 0.5 * (magnetization.astype(np.float64) ** 2 - n)
    return np.diag(energies).astype(np.complex128)


def global_parity(n: int) -> np.ndarray:
    """Π = σᶻ ⊗ … ⊗ σᶻ."""
    return pauli_string(n, {site: "z" for site in range(1, n + 1)})


def ghz_xy_hamiltonian(n: int, coupling: float, anisotropy: float, ising_coupling: float,
                       field: float = 0.0) -> NonHermitianHamiltonian:
    """XY chain as h1 and the all-to-all Ising term as h2."""
    return NonHermitianHamiltonian(xy_chain(n, coupling, anisotropy, field), ising_all_to_all(n, ising_coupling))


def local_product_terms(terms: Sequence[Sequence[ComplexMatrix]]) -> np.ndarray:
    """Σₙ Aₙ ⊗ Bₙ from a list of (Aₙ, Bₙ) pairs."""
    if not terms:
        raise ValidationError("need at least one (A, B) pair")
    return sum(np.kron(as_square_matrix(a), as_square_matrix(b)) for a, b in terms)


if __name__ == "__main__":
    print("Hamiltonian builders")
    print("=" * 60)
    print("Driven qubit (Δ=0.5, Ω=1):")
    print(driven_qubit(0.5, 1.0).real)
    h = ghz_xy_hamiltonian(4, 1.0, 0.75, 0.5)
    print(f"\nXY + Ising, N=4: dim={h.dim}, ‖h1‖={np.linalg.norm(h.h1):.4f}, ‖h2‖={np.linalg.norm(h.h2):.4f}")
    parity = global_parity(4)
    print(f"‖[h1, Π]‖ = {np.linalg.norm(h.h1 @ parity - parity @ h.h1):.2e}")
