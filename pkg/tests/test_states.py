import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedness.errors import (
    DegenerateSpectrumError,
    DimensionMismatchError,
    NonHermitianGeneratorError,
    ParameterRangeError,
    UndefinedQuantityError,
    ValidationError,
)
from mixedness.hamiltonians import SIGMA_X, SIGMA_Z, global_parity
from mixedness.linalg_core import partial_trace
from mixedness.states import (
    BlochParams,
    DensityMatrix,
    entropy_qfi_bound,
    ghz_marginal_entropy,
    ghz_marginal_purity,
    ghz_mixed_state,
    is_certified_separable,
    linear_entropy,
    purity,
    qfi_mixed,
    qubit_from_bloch,
    renyi2_consistency,
    separability_threshold,
    tsallis2_entropy,
)
from tests.conftest import random_hermitian, random_mixed_state, random_pure_state

bloch = st.builds(
    BlochParams,
    r=st.floats(0.0, 1.0),
    theta=st.floats(0.0, math.pi),
    phi=st.floats(0.0, 2.0 * math.pi, exclude_max=True),
)


class TestDensityMatrix:
    def test_rejects_invalid_matrices(self):
        with pytest.raises(ValidationError):
            DensityMatrix(np.array([[1.0, 0.5], [0.0, 0.0]]))
        with pytest.raises(ValidationError):
            DensityMatrix(np.eye(2))
        with pytest.raises(ValidationError):
            DensityMatrix(np.diag([1.5, -0.5]))
        with pytest.raises(DimensionMismatchError):
            DensityMatrix(np.eye(4) / 4, dims=(2, 3))

    def test_is_read_only(self):
        rho = DensityMatrix.maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0

    def test_from_ket_normalizes(self):
        rho = DensityMatrix.from_ket([3.0, 4.0j])
        assert math.isclose(np.trace(rho.matrix).real, 1.0)
        assert rho.is_pure()
        with pytest.raises(ValidationError):
            DensityMatrix.from_ket([0.0, 0.0])


class TestEntropies:
    def test_pure_and_maximally_mixed_extremes(self, rng):
        for d in (2, 4, 8):
            assert abs(linear_entropy(random_pure_state(rng, d))) < 1e-12
            assert math.isclose(linear_entropy(DensityMatrix.maximally_mixed(d)), 1.0)

    def test_one_dimensional_entropy_is_undefined(self):
        with pytest.raises(UndefinedQuantityError):
            linear_entropy(DensityMatrix(np.ones((1, 1))))

    def test_renyi_tsallis_and_linear_entropy_agree(self, rng):
        rho = random_mixed_state(rng, 4)
        s2, s_l = renyi2_consistency(rho)
        assert math.isclose(s2, -math.log(purity(rho)))
        assert math.isclose(s_l, linear_entropy(rho), rel_tol=1e-12)
        assert math.isclose(tsallis2_entropy(rho), 0.75 * linear_entropy(rho), rel_tol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(bloch)
    def test_qubit_entropy_is_one_minus_r_squared(self, b):
        rho = qubit_from_bloch(b)
        assert math.isclose(linear_entropy(rho), 1.0 - b.r ** 2, abs_tol=1e-12)

    def test_bloch_vector_orientation(self):
        rho = qubit_from_bloch(BlochParams(1.0, 0.0, 0.0))
        assert np.allclose(rho.matrix, [[1, 0], [0, 0]])
        assert math.isclose(rho.expect(SIGMA_X).real, 0.0, abs_tol=1e-15)

    @pytest.mark.parametrize("r, theta, phi", [(1.1, 0.0, 0.0), (0.5, -0.1, 0.0), (0.5, 0.0, 2 * math.pi)])
    def test_bloch_params_range(self, r, theta, phi):
        with pytest.raises(ParameterRangeError):
            BlochParams(r, theta, phi)


class TestSeparability:
    def test_threshold_values(self):
        assert separability_threshold(2) == 0.0
        assert math.isclose(separability_threshold(4), 8.0 / 9.0)
        with pytest.raises(ParameterRangeError):
            separability_threshold(1)

    def test_maximally_mixed_two_qubits_is_certified(self):
        assert is_certified_separable(DensityMatrix.maximally_mixed(4, (2, 2)))
        psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert not is_certified_separable(DensityMatrix.from_ket(psi, (2, 2)))


class TestGhzState:
    def test_pure_ghz_has_two_corner_entries(self):
        rho = ghz_mixed_state(3, 1.0)
        m = rho.matrix
        assert np.allclose([m[0, 0], m[0, 7], m[7, 0], m[7, 7]], 0.5)
        assert rho.dims == (2, 2, 2)

    def test_zero_mixing_is_maximally_mixed(self):
        assert np.allclose(ghz_mixed_state(4, 0.0).matrix, np.eye(16) / 16)

    @pytest.mark.parametrize("n, p", [(1, 0.5), (11, 0.5), (4, -0.1), (4, 1.5)])
    def test_rejects_out_of_range(self, n, p):
        with pytest.raises(ParameterRangeError):
            ghz_mixed_state(n, p)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(3, 6), st.data(), st.floats(0.0, 1.0))
    def test_marginal_purity_closed_form(self, n, data, p):
        k = data.draw(st.integers(1, n - 1))
        rho = ghz_mixed_state(n, p)
        marginal = partial_trace(rho.matrix, rho.dims, range(k))
        assert math.isclose(float(np.sum(np.abs(marginal) ** 2)), ghz_marginal_purity(k, p), abs_tol=1e-12)

    def test_pure_ghz_marginal_entropy(self):
        assert math.isclose(ghz_marginal_entropy(5, 1.0), 16.0 / 31.0)

    def test_commutes_with_parity(self):
        m = ghz_mixed_state(4, 0.3).matrix
        parity = global_parity(4)
        assert np.allclose(m @ parity, parity @ m)


class TestQuantumFisherInformation:
    def test_pure_state_qfi_is_four_times_variance(self, rng):
        rho = random_pure_state(rng, 4)
        lam = random_hermitian(rng, 4)
        mean = rho.expect(lam).real
        var = rho.expect(lam @ lam).real - mean ** 2
        assert math.isclose(qfi_mixed(rho, lam), 4.0 * var, rel_tol=1e-9)

    def test_mixed_state_qfi_matches_symmetric_log_derivative(self, rng):
        for _ in range(5):
            rho = random_mixed_state(rng, 3)
            lam = random_hermitian(rng, 3)
            m = rho.matrix
            sld = scipy.linalg.solve_sylvester(m, m, 2j * (lam @ m - m @ lam))
            expected = np.trace(m @ sld @ sld).real
            assert math.isclose(qfi_mixed(rho, lam), expected, rel_tol=1e-9, abs_tol=1e-12)

    def test_maximally_mixed_has_zero_qfi(self, rng):
        assert abs(qfi_mixed(DensityMatrix.maximally_mixed(3), random_hermitian(rng, 3))) < 1e-14

    def test_entropy_bound_holds_for_random_states(self, rng):
        for _ in range(20):
            rho = random_mixed_state(rng, 4, rank=2)
            lhs, rhs, holds = entropy_qfi_bound(rho, random_hermitian(rng, 4))
            assert holds, (lhs, rhs)

    def test_generator_checks(self):
        rho = DensityMatrix.maximally_mixed(2)
        with pytest.raises(NonHermitianGeneratorError):
            qfi_mixed(rho, np.array([[0, 1], [0, 0]]))
        with pytest.raises(DegenerateSpectrumError):
            entropy_qfi_bound(rho, np.eye(2))
        with pytest.raises(DimensionMismatchError):
            qfi_mixed(rho, SIGMA_Z[:1, :1])
