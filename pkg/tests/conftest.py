"""Shared fixtures: a fixed seed and factories for random states and generators."""

import numpy as np
import pytest

from mixedness.hamiltonians import NonHermitianHamiltonian
from mixedness.states import DensityMatrix

SEED = 12334567


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = 0.5 * (a + a.conj().T)
    return scale * h / np.linalg.norm(h, 2)


def random_pure_state(rng: np.random.Generator, d: int) -> DensityMatrix:
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return DensityMatrix.from_ket(psi)


def random_mixed_state(rng: np.random.Generator, d: int, rank: int = None) -> DensityMatrix:
    """Ginibre-ensemble state of the given rank (full rank by default)."""
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_generator(rng: np.random.Generator, d: int, norm: float = 1.0) -> NonHermitianHamiltonian:
    """H = h1 + i·h2 with ‖h1‖ = ‖h2‖ = norm/2 in the spectral norm."""
    return NonHermitianHamiltonian(random_hermitian(rng, d, 0.5 * norm), random_hermitian(rng, d, 0.5 * norm))


@pytest.fixture
def rng() -> np.random.Generator:
    """Fresh generator with the fixed seed, so every test sees the same draws."""
    return np.random.default_rng(SEED)


@pytest.fixture
def qubit_state(rng) -> DensityMatrix:
    return random_mixed_state(rng, 2)


@pytest.fixture
def store(tmp_path):
    from mixedness.run_store import RunStore

    return RunStore(out_dir=str(tmp_path))
