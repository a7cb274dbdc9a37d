"""Dense complex linear algebra helpers used throughout the package.

Everything here operates on plain ndarrays and is backed by numpy/scipy
(LAPACK eigensolvers, Pade scaling-and-squaring for the exponential, SVD
for null spaces).  Matrices are small (dimension at most a few hundred),
so robustness and clear error reporting matter more than scaling.
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import EmptyNullSpaceError, NoConvergenceError, NotHermitianError

HERMITICITY_ATOL = 1e-12


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def max_norm(a: np.ndarray) -> float:
    """Largest absolute entry (the tolerance norm used by the contracts)."""
    a = np.asarray(a)
    return 0.0 if a.size == 0 else float(np.max(np.abs(a)))


def is_hermitian(a: np.ndarray, atol: float = HERMITICITY_ATOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and max_norm(a - dagger(a)) <= atol


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(ops) -> np.ndarray:
    """Kronecker product of a sequence, left to right."""
    ops = list(ops)
    if not ops:
        raise ValueError("kron_all needs at least one operator")
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op))
    return out


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: vec(X rho Y) = (Y^T (x) X) vec(rho)."""
    return np.asarray(a).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


class HermitianEigen(NamedTuple):
    values: np.ndarray   # ascending, real
    vectors: np.ndarray  # columns are orthonormal eigenvectors


def hermitian_eig(a: np.ndarray, atol: float = HERMITICITY_ATOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    The input must be Hermitian within `atol` elementwise; the decomposition
    itself runs on the Hermitian average (a + a^dagger)/2 so roundoff in the
    input cannot leak imaginary parts into the eigenvalues.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dev = max_norm(a - dagger(a))
    if dev > atol:
        raise NotHermitianError(f"matrix deviates from Hermitian by {dev:.3e} (atol {atol:.1e})")
    try:
        values, vectors = np.linalg.eigh((a + dagger(a)) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    return HermitianEigen(values, vectors)


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with Pade approximants)."""
    return scipy.linalg.expm(np.asarray(a, dtype=complex))


def partial_trace(rho: np.ndarray, keep: int, n_qubits: int) -> np.ndarray:
    """Reduced 2x2 matrix of qubit `keep` (0-based) from an n-qubit state.

    Basis convention is big-endian: qubit 0 is the most significant bit of
    the computational-basis index.
    """
    rho = np.asarray(rho)
    dim = 2**n_qubits
    if rho.shape != (dim, dim):
        raise ValueError(f"expected shape {(dim, dim)} for {n_qubits} qubits, got {rho.shape}")
    if not 0 <= keep < n_qubits:
        raise IndexError(f"qubit index {keep} out of range for {n_qubits} qubits")
    left = 2**keep
    right = 2 ** (n_qubits - keep - 1)
    arr = rho.reshape(left, 2, right, left, 2, right)
    return np.einsum("aibajb->ij", arr)


def null_vector(a: np.ndarray, tol: float = 1e-9):
    """Unit-norm vector spanning the (numerical) null space of `a`.

    Returns (vector, nullity) where nullity counts singular values at or
    below tol * s_max.  The vector belongs to the smallest singular value;
    when the null space is degenerate it is one representative and the
    nullity flags the degeneracy.  Raises EmptyNullSpaceError when no
    singular value qualifies.
    """
    a = np.asarray(a, dtype=complex)
    try:
        _, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    if s.size == 0:
        raise EmptyNullSpaceError("empty matrix")
    nullity = int(np.count_nonzero(s <= tol * s[0])) if s[0] > 0 else s.size
    if nullity == 0:
        raise EmptyNullSpaceError(
            f"smallest singular value {s[-1]:.3e} exceeds {tol:.1e} * {s[0]:.3e}"
        )
    return vh[-1].conj(), nullity
