#!/usr/bin/env python3
"""
Dense complex linear algebra primitives shared by the rest of the package.

Matrices are plain numpy arrays of dtype complex128. Composite systems use the
Kronecker convention "first factor outermost": for a ⊗ b the row index is
i_a * dim(b) + i_b, so subsystem 0 is the most significant index.
"""

import logging
from functools import reduce
from typing import Iterable, Sequence, Tuple

import numpy as np
import scipy.linalg

from mixedness.errors import ConvergenceError, DimensionMismatchError

logger = logging.getLogger(__name__)

# Alias used in signatures; any square complex ndarray.
ComplexMatrix = np.ndarray

DEFAULT_EXPM_RTOL = 1e-12
HERMITIAN_ATOL = 1e-12


def as_square_matrix(m, name: str = "matrix") -> ComplexMatrix:
    """
    Coerce input to a square complex128 array.

    Raises:
        DimensionMismatchError: If the input is not a non-empty square 2-D array.
    """
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    return arr


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return np.conj(m).T


def is_hermitian(m: ComplexMatrix, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= atol)


def hermitize(m: ComplexMatrix) -> ComplexMatrix:
    """Symmetrize to the Hermitian part, (m + m†)/2."""
    return 0.5 * (m + dagger(m))


def _check_same_dim(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"operand shapes differ: {a.shape} vs {b.shape}")


def tensor_product(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product a ⊗ b with a's indices outermost."""
    return np.kron(as_square_matrix(a, "a"), as_square_matrix(b, "b"))


def tensor_product_all(ops: Iterable[ComplexMatrix]) -> ComplexMatrix:
    """Left-to-right Kronecker product of a sequence of operators."""
    return reduce(tensor_product, ops)


def partial_trace(m: ComplexMatrix, dims: Sequence[int], keep: Iterable[int]) -> ComplexMatrix:
    """
    Trace out every subsystem not listed in ``keep``.

    Args:
        m: Operator on the composite space.
        dims: Subsystem dimensions, outermost factor first.
        keep: 0-based indices of the subsystems to keep.

    Returns:
        The reduced operator on the kept subsystems, in their original order.

    Raises:
        DimensionMismatchError: If prod(dims) differs from dim(m), or keep is
            empty or names an unknown subsystem.
    """
    m = as_square_matrix(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != m.shape[0]:
        raise DimensionMismatchError(f"subsystem dims {dims} do not factor dimension {m.shape[0]}")
    kept = sorted(set(int(k) for k in keep))
    if not kept or kept[0] < 0 or kept[-1] >= len(dims):
        raise DimensionMismatchError(f"invalid subsystem selection {kept} for {len(dims)} subsystems")

    n = len(dims)
    tensor = m.reshape(dims + dims)
    row = list(range(n))
    col = [n + i for i in range(n)]
    for i in range(n):
        if i not in kept:
            col[i] = row[i]
    out = [row[i] for i in kept] + [col[i] for i in kept]
    reduced = np.einsum(tensor, row + col, out)
    d_keep = int(np.prod([dims[i] for i in kept]))
    return reduced.reshape(d_keep, d_keep)


def hermitian_split(h: ComplexMatrix) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """
    Split h = h1 + i·h2 into its Hermitian parts.

    Returns:
        (h1, h2) with h1 = (h + h†)/2 and h2 = (h − h†)/(2i).
    """
    h = as_square_matrix(h, "h")
    hd = dagger(h)
    return 0.5 * (h + hd), -0.5j * (h - hd)


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _check_same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _check_same_dim(a, b)
    return a @ b + b @ a


def expectation(rho: ComplexMatrix, op: ComplexMatrix) -> complex:
    """Tr(ρ·op) without forming the product."""
    rho = np.asarray(rho)
    op = np.asarray(op)
    _check_same_dim(rho, op)
    return complex(np.einsum("ij,ji->", rho, op))


def _exp_hermitian(k: ComplexMatrix, scale: complex) -> Tuple[ComplexMatrix, float]:
    """exp(scale·k) for Hermitian k, plus the eigendecomposition residual."""
    w, v = np.linalg.eigh(k)
    residual = np.linalg.norm((v * w) @ dagger(v) - k)
    return (v * np.exp(scale * w)) @ dagger(v), residual


def matrix_exponential(m: ComplexMatrix, rtol: float = DEFAULT_EXPM_RTOL) -> ComplexMatrix:
    """
    Matrix exponential exp(m).

    Hermitian and skew-Hermitian inputs go through eigh, other normal
    matrices through a complex Schur form (diagonal for normal m), and
    everything else through scipy's scaling-and-squaring Padé expm.

    Args:
        m: Square matrix.
        rtol: Relative tolerance of the decomposition residual check.

    Raises:
        ConvergenceError: If the result is not finite or a spectral backend
            and the Padé fallback both fail their checks.
    """
    m = as_square_matrix(m)
    norm = max(1.0, float(np.linalg.norm(m)))
    tol = rtol * norm * m.shape[0]

    result = None
    if is_hermitian(m, atol=tol):
        result, residual = _exp_hermitian(hermitize(m), 1.0)
        if residual > tol:
            logger.debug(f"eigh residual {residual:.3e} above {tol:.3e}; using Pade")
            result = None
    elif is_hermitian(1j * m, atol=tol):
        result, residual = _exp_hermitian(hermitize(1j * m), -1j)
        if residual > tol:
            logger.debug(f"eigh residual {residual:.3e} above {tol:.3e}; using Pade")
            result = None
    elif np.linalg.norm(m @ dagger(m) - dagger(m) @ m) <= tol * norm:
        t, z = scipy.linalg.schur(m, output="complex")
        diag = np.diag(t)
        if np.linalg.norm(t - np.diag(diag)) <= tol:
            result = (z * np.exp(diag)) @ dagger(z)

    if result is None:
        result = scipy.linalg.expm(m)

    if not np.all(np.isfinite(result)):
        raise ConvergenceError(f"matrix exponential produced non-finite entries (|m| = {norm:.3e})")
    return result
