import numpy as np
import pytest
import scipy.linalg

from mixedness.errors import DimensionMismatchError
from mixedness.hamiltonians import SIGMA_X, SIGMA_Y, SIGMA_Z
from mixedness.linalg_core import (
    anticommutator,
    as_square_matrix,
    commutator,
    hermitian_split,
    is_hermitian,
    matrix_exponential,
    partial_trace,
    tensor_product,
    tensor_product_all,
)
from tests.conftest import random_hermitian, random_mixed_state


def test_as_square_matrix_rejects_rectangles():
    with pytest.raises(DimensionMismatchError):
        as_square_matrix(np.zeros((2, 3)))
    with pytest.raises(DimensionMismatchError):
        as_square_matrix(np.zeros(4))


def test_tensor_product_puts_first_factor_outermost():
    a = np.diag([1.0, 2.0])
    b = np.diag([1.0, 10.0, 100.0])
    ab = tensor_product(a, b)
    assert ab.shape == (6, 6)
    # row index i_a * dim(b) + i_b
    assert ab[1 * 3 + 2, 1 * 3 + 2] == 200.0
    assert np.allclose(tensor_product_all([SIGMA_Z, SIGMA_Z, SIGMA_Z]),
                       np.kron(SIGMA_Z, np.kron(SIGMA_Z, SIGMA_Z)))


def test_partial_trace_of_product_recovers_factors(rng):
    rho_a = random_mixed_state(rng, 2).matrix
    rho_b = random_mixed_state(rng, 4).matrix
    joint = np.kron(rho_a, rho_b)
    assert np.allclose(partial_trace(joint, [2, 4], [0]), rho_a, atol=1e-14)
    assert np.allclose(partial_trace(joint, [2, 4], [1]), rho_b, atol=1e-14)


def test_partial_trace_keeps_several_subsystems_in_order(rng):
    states = [random_mixed_state(rng, d).matrix for d in (2, 3, 2)]
    joint = np.kron(states[0], np.kron(states[1], states[2]))
    assert np.allclose(partial_trace(joint, [2, 3, 2], [2, 0]), np.kron(states[0], states[2]), atol=1e-14)


def test_partial_trace_of_bell_state_is_maximally_mixed():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(partial_trace(np.outer(psi, psi), [2, 2], [1]), np.eye(2) / 2)


@pytest.mark.parametrize("dims, keep", [([2, 3], [0]), ([2, 2], []), ([2, 2], [2])])
def test_partial_trace_validates_selection(dims, keep):
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4), dims, keep)


def test_hermitian_split_reassembles(rng):
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h1, h2 = hermitian_split(h)
    assert is_hermitian(h1) and is_hermitian(h2)
    assert np.allclose(h1 + 1j * h2, h)


def test_pauli_algebra():
    assert np.allclose(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z)
    assert np.allclose(anticommutator(SIGMA_X, SIGMA_Y), 0)
    with pytest.raises(DimensionMismatchError):
        commutator(SIGMA_X, np.eye(3))


@pytest.mark.parametrize("kind", ["hermitian", "skew", "general"])
def test_matrix_exponential_matches_pade(rng, kind):
    h = random_hermitian(rng, 6, 3.0)
    if kind == "hermitian":
        m = h
    elif kind == "skew":
        m = -1j * h
    else:
        m = -1j * (h + 1j * random_hermitian(rng, 6, 1.0))
    assert np.allclose(matrix_exponential(m), scipy.linalg.expm(m), atol=1e-11)


def test_matrix_exponential_of_half_turn_is_i_sigma_x():
    assert np.allclose(matrix_exponential(0.5j * np.pi * SIGMA_X), 1j * SIGMA_X, atol=1e-12)


@pytest.mark.parametrize("d", [2, 4, 6])
def test_matrix_exponential_inverse_is_exponential_of_negative(rng, d):
    for _ in range(5):
        m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m *= rng.uniform(0.1, 5.0) / np.linalg.norm(m, 2)
        product = matrix_exponential(m) @ matrix_exponential(-m)
        assert np.allclose(product, np.eye(d), atol=1e-9)


def test_partial_trace_preserves_trace(rng):
    dims = (2, 3, 2)
    for keep in ([0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]):
        m = random_mixed_state(rng, 12).matrix
        assert np.isclose(np.trace(partial_trace(m, dims, keep)), 1.0, atol=1e-12)


def test_tensor_product_is_associative(rng):
    a, b, c = (random_hermitian(rng, d) for d in (2, 3, 2))
    left = tensor_product(tensor_product(a, b), c)
    assert np.allclose(left, tensor_product(a, tensor_product(b, c)))
    assert np.allclose(left, tensor_product_all([a, b, c]))


def test_matrix_exponential_of_nilpotent_jordan_block():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(matrix_exponential(m), [[1.0, 1.0], [0.0, 1.0]])
