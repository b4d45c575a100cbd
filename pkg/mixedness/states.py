#!/usr/bin/env python3
"""
Validated density matrices, mixedness functionals and the probe states.

Covers purity, normalized linear entropy, the Rényi-2 / Tsallis-2 relations,
the quantum Fisher information of a mixed state and the linear-entropy lower
bound it induces, the separability threshold, single-qubit states from Bloch
parameters, and the GHZ mixed state of N spins.

Computational basis: |0⟩ = (1, 0)ᵀ with σ_z|0⟩ = +|0⟩.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from mixedness.errors import (
    DegenerateSpectrumError,
    DimensionMismatchError,
    NonHermitianGeneratorError,
    ParameterRangeError,
    UndefinedQuantityError,
    ValidationError,
)
from mixedness.linalg_core import ComplexMatrix, as_square_matrix, dagger, expectation, hermitize

# Validation tolerances. Pass ``atol=`` to DensityMatrix to override.
STATE_ATOL = 1e-10
# Eigenvalues in [-CLIP_ATOL, 0) are treated as exact zeros.
CLIP_ATOL = 1e-10
# QFI pairs with p_j + p_k at or below this are skipped.
QFI_PAIR_FLOOR = 1e-12

MAX_SPINS = 10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A Hermitian, positive semidefinite, unit-trace matrix.

    Attributes:
        matrix: The d×d state (stored read-only).
        dims: Subsystem dimensions, outermost first; defaults to (d,).
        atol: Validation tolerance for Hermiticity, trace and positivity.
    """

    matrix: np.ndarray
    dims: Tuple[int, ...] = ()
    atol: float = field(default=STATE_ATOL, repr=False, compare=False)

    def __post_init__(self):
        m = np.array(as_square_matrix(self.matrix, "density matrix"), copy=True)
        d = m.shape[0]
        dims = tuple(int(x) for x in self.dims) if self.dims else (d,)
        if int(np.prod(dims)) != d:
            raise DimensionMismatchError(f"subsystem dims {dims} do not factor dimension {d}")

        herm_err = float(np.max(np.abs(m - dagger(m))))
        if herm_err > self.atol:
            raise ValidationError(f"state is not Hermitian (max deviation {herm_err:.3e})")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > self.atol:
            raise ValidationError(f"state trace is {trace.real:.12g}, expected 1")
        lowest = float(np.linalg.eigvalsh(hermitize(m))[0])
        if lowest < -self.atol:
            raise ValidationError(f"state is not positive semidefinite (lowest eigenvalue {lowest:.3e})")

        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_ket(cls, psi, dims: Tuple[int, ...] = ()) -> "DensityMatrix":
        """Projector onto a (not necessarily normalized) state vector."""
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0.0:
            raise ValidationError("cannot build a state from the zero vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), dims)

    @classmethod
    def maximally_mixed(cls, d: int, dims: Tuple[int, ...] = ()) -> "DensityMatrix":
        return cls(np.eye(d, dtype=np.complex128) / d, dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues with tiny negatives clipped to zero."""
        w = np.linalg.eigvalsh(hermitize(self.matrix))
        return np.where((w < 0.0) & (w >= -CLIP_ATOL), 0.0, w)

    def expect(self, op: ComplexMatrix) -> complex:
        return expectation(self.matrix, op)

    def is_pure(self, atol: float = 1e-9) -> bool:
        return abs(purity(self) - 1.0) <= atol


@dataclass(frozen=True)
class BlochParams:
    """Single-qubit Bloch coordinates: radius r, polar θ and azimuth φ (radians)."""

    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ParameterRangeError(f"Bloch radius r={self.r} outside [0, 1]")
        if not 0.0 <= self.theta <= math.pi:
            raise ParameterRangeError(f"polar angle theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ParameterRangeError(f"azimuth phi={self.phi} outside [0, 2pi)")

    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return self.r * np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


def purity(rho: DensityMatrix) -> float:
    """f = Tr(ρ²), evaluated as the squared Frobenius norm of the Hermitian ρ."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def linear_entropy(rho: DensityMatrix) -> float:
    """
    Normalized linear entropy S_L = [d/(d−1)](1 − Tr ρ²).

    Raises:
        UndefinedQuantityError: For d = 1.
    """
    d = rho.dim
    if d < 2:
        raise UndefinedQuantityError("linear entropy is undefined for a one-dimensional state")
    return d / (d - 1) * (1.0 - purity(rho))


def linear_entropy_from_purity(f: float, d: int) -> float:
    if d < 2:
        raise UndefinedQuantityError("linear entropy is undefined for a one-dimensional state")
    return d / (d - 1) * (1.0 - f)


def tsallis2_entropy(rho: DensityMatrix) -> float:
    """Tsallis entropy of order 2, 1 − Tr ρ²."""
    return 1.0 - purity(rho)


def renyi2_consistency(rho: DensityMatrix) -> Tuple[float, float]:
    """
    Rényi-2 (collision) entropy and the linear entropy recovered from it.

    Returns:
        (S2, S_L) with S2 = −ln Tr ρ² and S_L = [d/(d−1)](1 − e^{−S2}).
    """
    s2 = -math.log(purity(rho))
    return s2, linear_entropy_from_purity(math.exp(-s2), rho.dim)


def separability_threshold(d: int) -> float:
    """Linear-entropy value d(d−2)/(d−1)² above which a d-dimensional state is separable."""
    if d < 2:
        raise ParameterRangeError(f"dimension must be at least 2, got {d}")
    return d * (d - 2) / (d - 1) ** 2


def is_certified_separable(rho: DensityMatrix) -> bool:
    """True when S_L(ρ) reaches the separability threshold for its dimension."""
    return linear_entropy(rho) >= separability_threshold(rho.dim) - STATE_ATOL


def qubit_from_bloch(b: BlochParams) -> DensityMatrix:
    """ρ = (I + r⃗·σ⃗)/2."""
    x, y, z = b.vector()
    m = 0.5 * np.array([[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]], dtype=np.complex128)
    return DensityMatrix(m)


def _check_spins(n: int, name: str = "N", lower: int = 2) -> None:
    if not lower <= n <= MAX_SPINS:
        raise ParameterRangeError(f"{name}={n} outside [{lower}, {MAX_SPINS}]")


def ghz_ket(n: int) -> np.ndarray:
    """(|0…0⟩ + |1…1⟩)/√2 on n qubits."""
    psi = np.zeros(2 ** n, dtype=np.complex128)
    psi[0] = psi[-1] = 1.0 / math.sqrt(2.0)
    return psi


def ghz_mixed_state(n: int, p: float) -> DensityMatrix:
    """
    ((1−p)/2^N)·I + p·|GHZ_N⟩⟨GHZ_N| with one qubit per subsystem.

    Raises:
        ParameterRangeError: If N is outside [2, 10] or p outside [0, 1].
    """
    _check_spins(n)
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"mixing parameter p={p} outside [0, 1]")
    d = 2 ** n
    psi = ghz_ket(n)
    m = (1.0 - p) / d * np.eye(d, dtype=np.complex128) + p * np.outer(psi, psi.conj())
    return DensityMatrix(m, (2,) * n)


def ghz_marginal_purity(k: int, p: float) -> float:
    """Purity of any k-site marginal (k < N) of the GHZ mixed state."""
    return (1.0 + (2 ** (k - 1) - 1) * p * p) / 2 ** k


def ghz_marginal_entropy(k: int, p: float) -> float:
    return linear_entropy_from_purity(ghz_marginal_purity(k, p), 2 ** k)


def _check_generator(rho: DensityMatrix, lam: ComplexMatrix) -> np.ndarray:
    lam = as_square_matrix(lam, "generator")
    if lam.shape != rho.matrix.shape:
        raise DimensionMismatchError(f"generator shape {lam.shape} does not match state {rho.matrix.shape}")
    if np.max(np.abs(lam - dagger(lam))) > STATE_ATOL:
        raise NonHermitianGeneratorError("QFI generator must be Hermitian")
    return hermitize(lam)


def qfi_mixed(rho: DensityMatrix, lam: ComplexMatrix) -> float:
    """
    Quantum Fisher information of ρ for the unitary encoding e^{−iθΛ}.

    F = 2 Σ_{j,k} (p_j − p_k)²/(p_j + p_k) |⟨j|Λ|k⟩|², over pairs with
    p_j + p_k above QFI_PAIR_FLOOR.

    Raises:
        NonHermitianGeneratorError: If Λ is not Hermitian.
    """
    lam = _check_generator(rho, lam)
    w, v = np.linalg.eigh(hermitize(rho.matrix))
    w = np.clip(w, 0.0, None)
    lam_eig = dagger(v) @ lam @ v
    sums = w[:, None] + w[None, :]
    diffs = (w[:, None] - w[None, :]) ** 2
    mask = sums > QFI_PAIR_FLOOR
    weights = np.zeros_like(sums)
    weights[mask] = diffs[mask] / sums[mask]
    return float(2.0 * np.sum(weights * np.abs(lam_eig) ** 2))


def variance(rho: DensityMatrix, op: ComplexMatrix) -> float:
    mean = rho.expect(op).real
    return rho.expect(op @ op).real - mean * mean


def entropy_qfi_bound(rho: DensityMatrix, lam: ComplexMatrix) -> Tuple[float, float, bool]:
    """
    Check S_L(ρ) ≥ [2d/(d−1)]·(Var_ρ(Λ) − F/4)/(λ_max − λ_min)².

    Returns:
        (lhs, rhs, holds), with holds allowing a 1e-10 slack.

    Raises:
        DegenerateSpectrumError: If Λ is proportional to the identity.
    """
    lam = _check_generator(rho, lam)
    spectrum = np.linalg.eigvalsh(lam)
    width = float(spectrum[-1] - spectrum[0])
    if width <= STATE_ATOL:
        raise DegenerateSpectrumError("generator spectrum has zero width")
    d = rho.dim
    lhs = linear_entropy(rho)
    rhs = 2.0 * d / (d - 1) * (variance(rho, lam) - qfi_mixed(rho, lam) / 4.0) / width ** 2
    return lhs, rhs, lhs >= rhs - 1e-10
