"""Secular master-equation construction.

Each qubit couples to its reservoir through sigma_x, which splits into
eigenoperators of the system Hamiltonian, one per Bohr frequency:

    A_j(w) = sum over eigenpairs (k, l) with E_l - E_k = w of
             P_k sigma_x_j P_l

so that [H, A_j(w)] = -w A_j(w), the set sums back to sigma_x_j, and
A_j(-w) = A_j(w)^dagger.  In the full rotating-wave (secular) regime each
A_j(w) enters its own Lindblad channel with the golden-rule rate at w.

Eigenvalue differences equal within a small tolerance are clustered into a
single Bohr frequency; operators with vanishing norm or vanishing rate
carry no dynamics and are dropped from the generator (after the structural
identities above have been checked on the complete set).
"""

from dataclasses import dataclass

import numpy as np

from .baths import decay_rate
from .errors import InvalidSpecError
from .linalg import HermitianEigen, commutator, dagger, hermitian_eig, max_norm
from .model import SystemSpec, build_hamiltonian, sigma_x_full, validate

CLUSTER_TOL = 1e-9      # Bohr frequencies closer than this are one line
OPERATOR_FLOOR = 1e-12  # eigenoperators below this max norm are dropped

_EIGENOPERATOR_TOL = 1e-9
_COMPLETENESS_TOL = 1e-10
_CONJUGATION_TOL = 1e-10


@dataclass(frozen=True)
class JumpOperator:
    """One Lindblad channel: qubit of origin, Bohr frequency, rate, operator."""

    qubit: int
    omega: float
    rate: float
    operator: np.ndarray


@dataclass(frozen=True)
class BohrDecomposition:
    """Hamiltonian eigendata plus the surviving Lindblad channels.

    frequencies[j] lists every Bohr line of qubit j with a nonvanishing
    eigenoperator, including those whose rate is zero; jumps holds only the
    channels that actually enter the generator.
    """

    hamiltonian: np.ndarray
    eigen: HermitianEigen
    n_qubits: int
    jumps: tuple
    frequencies: tuple


def _cluster_differences(values: np.ndarray, tol: float):
    """Group sorted values into runs whose spread from the anchor is <= tol."""
    order = np.argsort(values, kind="stable")
    clusters = []
    anchor = None
    for idx in order:
        v = values[idx]
        if anchor is None or v - anchor > tol:
            clusters.append([])
            anchor = v
        clusters[-1].append(idx)
    return clusters


def eigenoperators(eigen: HermitianEigen, op: np.ndarray, cluster_tol: float = CLUSTER_TOL):
    """Complete eigenoperator split of `op`: list of (frequency, operator).

    Frequencies are cluster means, snapped to exactly 0.0 when the cluster
    straddles zero; the returned operators sum to `op`.
    """
    lam, v = eigen
    d = lam.size
    s = dagger(v) @ op @ v
    diffs = (lam[None, :] - lam[:, None]).reshape(-1)  # omega of pair (k, l) at k*d + l
    out = []
    for cluster in _cluster_differences(diffs, cluster_tol):
        omega = float(np.mean(diffs[cluster]))
        if abs(omega) <= cluster_tol:
            omega = 0.0
        mask = np.zeros((d, d), dtype=bool)
        flat = np.asarray(cluster)
        mask[flat // d, flat % d] = True
        a = v @ np.where(mask, s, 0.0) @ dagger(v)
        out.append((omega, a))
    return out


def _check_structure(h, op, ops, qubit):
    total = np.zeros_like(op)
    by_omega = {}
    for omega, a in ops:
        total += a
        by_omega[omega] = a
        dev = max_norm(commutator(h, a) + omega * a)
        assert dev <= _EIGENOPERATOR_TOL, (
            f"eigenoperator identity broken for qubit {qubit} at w={omega:g}: {dev:.3e}"
        )
    dev = max_norm(total - op)
    assert dev <= _COMPLETENESS_TOL, f"eigenoperators of qubit {qubit} do not sum back: {dev:.3e}"
    omegas = sorted(by_omega)
    for omega in omegas:
        if omega <= 0:
            continue
        partner = min(by_omega, key=lambda w: abs(w + omega))
        dev = max_norm(by_omega[partner] - dagger(by_omega[omega]))
        assert abs(partner + omega) <= CLUSTER_TOL and dev <= _CONJUGATION_TOL, (
            f"conjugation pairing broken for qubit {qubit} at w={omega:g}: {dev:.3e}"
        )


def decompose(spec: SystemSpec, cluster_tol: float = CLUSTER_TOL) -> BohrDecomposition:
    """Build the secular Lindblad channels for a valid spec."""
    report = validate(spec)
    if not report.ok:
        raise InvalidSpecError(f"invalid spec: {report.summary()}", report)
    h = build_hamiltonian(spec)
    eigen = hermitian_eig(h)
    n = spec.n_qubits
    jumps = []
    frequencies = []
    for j in range(n):
        sx = sigma_x_full(j, n)
        ops = eigenoperators(eigen, sx, cluster_tol)
        _check_structure(h, sx, ops, j)
        lines = []
        for omega, a in ops:
            if max_norm(a) <= OPERATOR_FLOOR:
                continue
            lines.append(omega)
            rate = decay_rate(omega, spec.qubits[j].bath, spec.zero_frequency_terms)
            if rate > 0.0:
                jumps.append(JumpOperator(j, omega, rate, a))
        frequencies.append(tuple(sorted(lines)))
    return BohrDecomposition(h, eigen, n, tuple(jumps), tuple(frequencies))


def dissipator(rho: np.ndarray, dec: BohrDecomposition) -> np.ndarray:
    """Sum of the Lindblad channels applied to `rho` (commutator excluded)."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for jump in dec.jumps:
        a = jump.operator
        ada = dagger(a) @ a
        out += jump.rate * (a @ rho @ dagger(a) - 0.5 * (ada @ rho + rho @ ada))
    return out


def rhs(rho: np.ndarray, h: np.ndarray, dec: BohrDecomposition) -> np.ndarray:
    """Full generator in operator form: -i[H, rho] plus the dissipator."""
    rho = np.asarray(rho, dtype=complex)
    return -1j * commutator(h, rho) + dissipator(rho, dec)


def liouvillian_matrix(h: np.ndarray, jumps) -> np.ndarray:
    """Column-stacked superoperator matrix of the same generator.

    Column stacking turns X rho Y into (Y^T kron X) vec(rho), so the
    channel A rho A^dagger becomes conj(A) kron A.
    """
    d = h.shape[0]
    eye = np.eye(d)
    lv = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for jump in jumps:
        a = jump.operator
        ada = dagger(a) @ a
        lv += jump.rate * (
            np.kron(a.conj(), a)
            - 0.5 * np.kron(eye, ada)
            - 0.5 * np.kron(ada.T, eye)
        )
    return lv


def liouvillian(spec: SystemSpec) -> np.ndarray:
    dec = decompose(spec)
    return liouvillian_matrix(dec.hamiltonian, dec.jumps)
