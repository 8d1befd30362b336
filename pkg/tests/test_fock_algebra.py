"""
Tests for the truncated Fock-space algebra.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qee_witness.errors import ContractViolationError, InvalidDimensionError
from qee_witness.physics.fock import (
    HermitianSpectrum,
    annihilation,
    block,
    coherent_state,
    commutator,
    creation,
    dagger,
    displacement,
    expectation,
    expm_hermitian,
    fock_projector,
    identity,
    is_hermitian,
    is_unitary,
    joint_product_state,
    negativity,
    number_operator,
    partial_trace_env,
    partial_transpose_qubit,
    pure_qubit,
    purity,
    trace_distance,
    validate_density_operator,
)


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ dagger(g)
    return rho / np.trace(rho)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + dagger(g))


def bell_state() -> np.ndarray:
    """(|0,0> + |1,1>)/sqrt(2) with a two-level environment."""
    ket = np.zeros(4, dtype=np.complex128)
    ket[0] = ket[3] = 1 / math.sqrt(2)
    return np.outer(ket, ket.conj())


def taylor_expm(h: np.ndarray, scale: float, terms: int = 30, squarings: int = 6) -> np.ndarray:
    """exp(-i scale H) by scaled Taylor summation and repeated squaring."""
    x = -1j * scale * h / 2 ** squarings
    result = np.eye(h.shape[0], dtype=np.complex128)
    term = np.eye(h.shape[0], dtype=np.complex128)
    for k in range(1, terms):
        term = term @ x / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


class TestLadderOperators:
    """Annihilation, creation and number operators."""

    def test_annihilation_dim2(self):
        assert_allclose(annihilation(2), [[0, 1], [0, 0]])

    def test_annihilation_matrix_element(self):
        assert annihilation(3)[1, 2] == pytest.approx(math.sqrt(2))

    def test_number_operator_spectrum(self):
        a = annihilation(4)
        assert_allclose(np.diag(dagger(a) @ a).real, [0, 1, 2, 3])
        assert_allclose(creation(4) @ a, number_operator(4))

    def test_canonical_commutator_below_cutoff(self):
        a = annihilation(10)
        c = commutator(a, creation(10))
        # [a, a^dag] = 1 except on the last level
        assert_allclose(c[:-1, :-1], np.eye(9), atol=1e-14)

    @pytest.mark.parametrize("dim", [0, 1, -3])
    def test_dimension_too_small(self, dim):
        with pytest.raises(InvalidDimensionError):
            annihilation(dim)

    def test_dimension_error_is_value_error(self):
        with pytest.raises(ValueError):
            identity(1)

    def test_fock_projector_out_of_range(self):
        with pytest.raises(InvalidDimensionError):
            fock_projector(5, 5)


class TestHermitianExponential:
    """exp(-i s H) via eigendecomposition."""

    def test_zero_generator(self):
        assert_allclose(expm_hermitian(np.zeros((5, 5), dtype=np.complex128), 3.7), np.eye(5), atol=1e-14)

    def test_number_operator_at_pi(self):
        assert_allclose(expm_hermitian(number_operator(3), math.pi), np.diag([1, -1, 1]), atol=1e-12)

    def test_matches_taylor_series(self):
        a = annihilation(40)
        h = a + dagger(a)
        assert_allclose(expm_hermitian(h, 0.7), taylor_expm(h, 0.7), atol=1e-8)

    def test_inverse_pair(self, rng):
        for _ in range(10):
            h = random_hermitian(rng, 12)
            s = float(rng.uniform(-5, 5))
            product = expm_hermitian(h, s) @ expm_hermitian(h, -s)
            assert_allclose(product, np.eye(12), atol=1e-10)

    def test_unitary(self, rng):
        u = expm_hermitian(random_hermitian(rng, 20), 2.3)
        assert is_unitary(u)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ContractViolationError):
            expm_hermitian(annihilation(4), 1.0)

    def test_spectrum_arrays_are_read_only(self):
        spectrum = HermitianSpectrum(number_operator(4))
        with pytest.raises(ValueError):
            spectrum.eigenvalues[0] = 1.0


class TestDisplacement:
    """Displacement operators and coherent states."""

    def test_zero_is_identity(self):
        assert_allclose(displacement(0.0, 7), np.eye(7), atol=1e-12)

    def test_coherent_mean_occupation(self):
        rho = coherent_state(0.5, 40)
        assert expectation(number_operator(40), rho).real == pytest.approx(0.25, abs=1e-10)

    def test_inverse(self):
        lam = 1 + 1j
        assert_allclose(displacement(lam, 60) @ displacement(-lam, 60), np.eye(60), atol=1e-10)

    def test_composition_phase(self):
        lam, mu = 0.3 + 0.2j, -0.1 + 0.4j
        dim = 60
        phase = np.exp((lam * np.conj(mu) - np.conj(lam) * mu) / 2)
        lhs = displacement(lam, dim) @ displacement(mu, dim)
        rhs = phase * displacement(lam + mu, dim)
        # low-lying columns only; the truncation edge breaks the group law
        assert_allclose(lhs[:, :8], rhs[:, :8], atol=1e-8)

    def test_unitary(self):
        assert is_unitary(displacement(0.8 - 0.3j, 30))


class TestTraceDistance:
    """Trace distance between density operators."""

    def test_identical_states(self, rng):
        rho = random_density(rng, 6)
        assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_pure_states(self):
        assert trace_distance(fock_projector(0, 4), fock_projector(1, 4)) == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_against_coherent_state(self):
        dim = 40
        d = trace_distance(fock_projector(0, dim), coherent_state(1.0, dim))
        assert d == pytest.approx(math.sqrt(1 - math.exp(-1)), abs=1e-8)

    def test_symmetry_and_triangle_inequality(self, rng):
        for _ in range(20):
            r, s, u = (random_density(rng, 5) for _ in range(3))
            assert trace_distance(r, s) == pytest.approx(trace_distance(s, r), abs=1e-12)
            assert trace_distance(r, u) <= trace_distance(r, s) + trace_distance(s, u) + 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidDimensionError):
            trace_distance(fock_projector(0, 3), fock_projector(0, 4))

    def test_rejects_large_negative_eigenvalue(self):
        bad = np.diag([1.1, -0.1]).astype(np.complex128)
        with pytest.raises(ContractViolationError):
            trace_distance(bad, fock_projector(0, 2))


class TestDensityContract:
    """validate_density_operator and scalar functionals."""

    def test_valid_state(self, rng):
        validate_density_operator(random_density(rng, 8))

    def test_wrong_trace(self):
        with pytest.raises(ContractViolationError, match="trace"):
            validate_density_operator(2 * fock_projector(0, 3))

    def test_not_hermitian(self):
        rho = fock_projector(0, 3) + 0.1 * annihilation(3)
        with pytest.raises(ContractViolationError, match="Hermitian"):
            validate_density_operator(rho)

    def test_negative_eigenvalue(self):
        with pytest.raises(ContractViolationError, match="eigenvalue"):
            validate_density_operator(np.diag([1.2, -0.2]).astype(np.complex128))

    def test_purity(self):
        assert purity(coherent_state(0.4, 30)) == pytest.approx(1.0, abs=1e-12)
        assert purity(np.eye(4) / 4) == pytest.approx(0.25)

    def test_is_hermitian(self):
        assert is_hermitian(number_operator(5))
        assert not is_hermitian(annihilation(5))


class TestJointStates:
    """Partial transpose, negativity and partial trace on qubit (x) mode states."""

    def test_product_state_unchanged_by_partial_transpose(self, rng):
        state = joint_product_state(fock_projector(0, 2), random_density(rng, 4))
        assert_allclose(partial_transpose_qubit(state), state)

    def test_partial_transpose_moves_blocks(self, rng):
        state = random_density(rng, 10)
        pt = partial_transpose_qubit(state)
        assert_allclose(block(pt, 0, 1), block(state, 1, 0))
        assert_allclose(block(pt, 1, 1), block(state, 1, 1))

    def test_bell_state_spectrum(self):
        evals = np.linalg.eigvalsh(partial_transpose_qubit(bell_state()))
        assert evals[0] == pytest.approx(-0.5, abs=1e-12)

    def test_bell_state_negativity(self):
        assert negativity(bell_state()) == pytest.approx(0.5, abs=1e-12)

    def test_product_state_negativity(self, rng):
        _, qubit = pure_qubit(0.6, 0.8j)
        assert negativity(joint_product_state(qubit, random_density(rng, 6))) == pytest.approx(0.0, abs=1e-12)

    def test_separable_mixtures_are_ppt(self, rng):
        for _ in range(10):
            p = float(rng.uniform(0.1, 0.9))
            state = (
                p * joint_product_state(fock_projector(0, 2), random_density(rng, 6))
                + (1 - p) * joint_product_state(fock_projector(1, 2), random_density(rng, 6))
            )
            assert np.linalg.eigvalsh(partial_transpose_qubit(state))[0] >= -1e-10
            assert negativity(state) == pytest.approx(0.0, abs=1e-9)

    def test_partial_trace_of_plus_state(self, rng):
        _, plus = pure_qubit(1 / math.sqrt(2), 1 / math.sqrt(2))
        reduced = partial_trace_env(joint_product_state(plus, random_density(rng, 5)))
        assert_allclose(reduced, np.full((2, 2), 0.5), atol=1e-14)

    def test_partial_trace_of_bell_state(self):
        assert_allclose(partial_trace_env(bell_state()), np.eye(2) / 2, atol=1e-14)

    def test_partial_trace_recovers_qubit(self, rng):
        _, qubit = pure_qubit(0.6, -0.8j)
        state = joint_product_state(qubit, random_density(rng, 7))
        assert_allclose(partial_trace_env(state), qubit, atol=1e-14)

    def test_odd_dimension_rejected(self):
        with pytest.raises(InvalidDimensionError):
            partial_trace_env(np.eye(5) / 5)
