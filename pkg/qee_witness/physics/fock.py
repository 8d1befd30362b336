"""
Dense linear algebra on a truncated single-mode Fock space.

Operators are complex128 numpy arrays indexed by occupation number
0..N-1. Joint qubit-mode states are 2N x 2N arrays ordered qubit-major,
i.e. block (q, q') occupies rows q*N:(q+1)*N and columns q'*N:(q'+1)*N.
"""

from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.linalg as la

from qee_witness.errors import ContractViolationError, InvalidDimensionError


Operator = np.ndarray

HERMITIAN_TOL = 1e-10
DENSITY_TOL = 1e-12
EIGEN_FLOOR = -1e-10


def _check_dim(dim: int) -> None:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"Fock dimension must be an integer >= 2, got {dim}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def dagger(a: Operator) -> Operator:
    return a.conj().T


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def identity(dim: int) -> Operator:
    _check_dim(dim)
    return np.eye(dim, dtype=np.complex128)


def annihilation(dim: int) -> Operator:
    """Ladder operator with <n-1|a|n> = sqrt(n)."""
    _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1).astype(np.complex128)


def creation(dim: int) -> Operator:
    return dagger(annihilation(dim)).copy()


def number_operator(dim: int) -> Operator:
    _check_dim(dim)
    return np.diag(np.arange(dim, dtype=np.float64)).astype(np.complex128)


def fock_projector(n: int, dim: int) -> Operator:
    """|n><n| on the truncated space."""
    _check_dim(dim)
    if not 0 <= n < dim:
        raise InvalidDimensionError(f"Fock level {n} outside 0..{dim - 1}")
    p = np.zeros((dim, dim), dtype=np.complex128)
    p[n, n] = 1.0
    return p


def hermiticity_error(a: Operator) -> float:
    """max |A - A^dag| entrywise."""
    return float(np.max(np.abs(a - dagger(a)))) if a.size else 0.0


def is_hermitian(a: Operator, tol: float = HERMITIAN_TOL) -> bool:
    return a.ndim == 2 and a.shape[0] == a.shape[1] and hermiticity_error(a) <= tol


def is_unitary(u: Operator, tol: float = HERMITIAN_TOL) -> bool:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0])))) <= tol


def validate_density_operator(rho: Operator, tol: float = DENSITY_TOL) -> None:
    """
    Check the DensityOperator contract: square, Hermitian and unit trace
    within tol, no eigenvalue below the -1e-10 truncation floor.

    Raises:
        ContractViolationError: if any predicate fails
    """
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ContractViolationError(f"density operator must be square, got shape {rho.shape}")
    herm = hermiticity_error(rho)
    if herm > tol:
        raise ContractViolationError(f"density operator not Hermitian (error {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ContractViolationError(f"density operator trace {tr.real:.15g} differs from 1")
    min_eig = float(la.eigvalsh(rho)[0])
    if min_eig < EIGEN_FLOOR:
        raise ContractViolationError(
            f"density operator has eigenvalue {min_eig:.3e} below floor {EIGEN_FLOOR:.0e}"
        )


def _clamped(rho: Operator) -> Operator:
    """
    Clamp truncation-induced negative eigenvalues in [-1e-10, 0) to zero and
    renormalize. Anything more negative is a genuine failure.
    """
    rho = 0.5 * (rho + dagger(rho))
    evals, evecs = la.eigh(rho)
    if evals[0] >= 0.0:
        return rho
    if evals[0] < EIGEN_FLOOR:
        raise ContractViolationError(
            f"eigenvalue {evals[0]:.3e} below floor {EIGEN_FLOOR:.0e}; "
            "the Fock cutoff is probably not converged"
        )
    evals = np.clip(evals, 0.0, None)
    evals /= evals.sum()
    return (evecs * evals) @ dagger(evecs)


def purity(rho: Operator) -> float:
    return float(np.real(np.trace(rho @ rho)))


def expectation(op: Operator, rho: Operator) -> complex:
    """Tr[op rho]."""
    return complex(np.einsum("ij,ji->", op, rho))


class HermitianSpectrum:
    """
    Eigendecomposition H = U diag(E) U^dag of a Hermitian generator.

    Reused across time grids: every propagator exp(-i s H) costs one
    matrix product instead of a new exponential.
    """

    def __init__(self, h: Operator, tol: float = HERMITIAN_TOL):
        herm = hermiticity_error(h)
        if herm > tol:
            raise ContractViolationError(f"generator is not Hermitian (error {herm:.3e})")
        evals, evecs = la.eigh(0.5 * (h + dagger(h)))
        self.eigenvalues = _readonly(evals)
        self.eigenvectors = _readonly(evecs)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @cached_property
    def _evecs_dag(self) -> np.ndarray:
        return _readonly(dagger(self.eigenvectors).copy())

    def propagator(self, scale: float) -> Operator:
        """exp(-i * scale * H)."""
        phases = np.exp(-1j * scale * self.eigenvalues)
        return (self.eigenvectors * phases) @ self._evecs_dag

    def diagonal_weights(self, rho: Operator) -> np.ndarray:
        """diag(U^dag rho U): populations of rho in the eigenbasis of H."""
        return np.einsum("ki,kl,li->i", self.eigenvectors.conj(), rho, self.eigenvectors)


def expm_hermitian(h: Operator, scale: float) -> Operator:
    """
    exp(-i * scale * H) for Hermitian H via eigendecomposition.

    Raises:
        ContractViolationError: H is not Hermitian within 1e-10
    """
    return HermitianSpectrum(h).propagator(scale)


def displacement(lam: complex, dim: int) -> Operator:
    """D(lambda) = exp(lambda a^dag - lambda* a) on the truncated space."""
    a = annihilation(dim)
    # lambda a^dag - lambda* a = -i H with H = i (lambda a^dag - lambda* a)
    h = 1j * (lam * dagger(a) - np.conj(lam) * a)
    return expm_hermitian(h, 1.0)


def coherent_state(lam: complex, dim: int) -> Operator:
    """|lambda><lambda| built as D(lambda)|0><0|D(lambda)^dag."""
    d = displacement(lam, dim)
    ket = d[:, 0]
    return np.outer(ket, ket.conj())


def trace_distance(rho: Operator, sigma: Operator) -> float:
    """
    (1/2) sum |eig(rho - sigma)|.

    Raises:
        InvalidDimensionError: operands differ in dimension
        ContractViolationError: either operand is not a density operator
    """
    if rho.shape != sigma.shape:
        raise InvalidDimensionError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    diff = _clamped(rho) - _clamped(sigma)
    evals = la.eigvalsh(0.5 * (diff + dagger(diff)))
    return float(0.5 * np.sum(np.abs(evals)))


def _env_dim(state: Operator) -> int:
    if state.ndim != 2 or state.shape[0] != state.shape[1] or state.shape[0] % 2:
        raise InvalidDimensionError(f"joint state must be 2N x 2N, got shape {state.shape}")
    return state.shape[0] // 2


def joint_product_state(qubit: Operator, env: Operator) -> Operator:
    """qubit (2x2) tensor env (NxN), qubit-major ordering."""
    if qubit.shape != (2, 2):
        raise InvalidDimensionError(f"qubit state must be 2x2, got {qubit.shape}")
    return np.kron(qubit, env)


def partial_transpose_qubit(state: Operator) -> Operator:
    """Transpose the qubit factor: block (q, q') moves to (q', q)."""
    n = _env_dim(state)
    return state.reshape(2, n, 2, n).transpose(2, 1, 0, 3).reshape(2 * n, 2 * n)


def negativity(state: Operator) -> float:
    """Sum of |negative eigenvalues| of the qubit partial transpose."""
    _env_dim(state)
    pt = partial_transpose_qubit(_clamped(state))
    evals = la.eigvalsh(0.5 * (pt + dagger(pt)))
    return float(-np.sum(evals[evals < 0.0]))


def partial_trace_env(state: Operator) -> Operator:
    """2x2 reduced qubit state, rho_qq' = Tr_env[block(q, q')]."""
    n = _env_dim(state)
    return np.einsum("qnpn->qp", state.reshape(2, n, 2, n))


def block(state: Operator, q: int, qp: int) -> Operator:
    """Environment block (q, q') of a joint state."""
    n = _env_dim(state)
    return state[q * n:(q + 1) * n, qp * n:(qp + 1) * n]


def pure_qubit(a: complex, b: complex) -> Tuple[np.ndarray, Operator]:
    """Ket a|0> + b|1> and its projector."""
    ket = np.array([a, b], dtype=np.complex128)
    return ket, np.outer(ket, ket.conj())
