"""System specification: qubit networks with a single resonant interaction.

An n-qubit system (n = 3 or 4) has the Hamiltonian

    H = (1/2) * sum_j energy_j * sz_j  +  g * (|ket><bra| + |bra><ket|)

where |ket> and |bra> are the computational-basis states named by the
interaction kind.  Basis convention throughout: big-endian, qubit 0 is the
most significant bit, |0> is the +1 eigenvector of sz.  With that sign
choice a qubit of positive splitting has |1> as its ground state, so its
thermal population of |0> is below one half.

The interaction is energy-conserving only on the hypersurface where the
signed splittings of the flipped qubits cancel.  Writing c_j = +1 when the
ket excites qubit j (bit 0 -> its |0> component) and c_j = -1 when it
de-excites it, the constraint is sum_j c_j * energy_j = 0.  Validation
enforces it, which is what makes the machine run without external work.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .baths import BathSpec
from .errors import InvalidSpecError
from .linalg import kron_all
from .state import DensityMatrix

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

ENERGY_FLOOR = 1e-9       # |energy| below this counts as a degenerate qubit
CONSTRAINT_TOL = 1e-12    # residual allowed on the energy-conservation sum


class InteractionKind(Enum):
    """Resonant bit-flip interactions, named by their ket/bra bitstrings."""

    Q3_111_000 = ("111", "000")
    Q3_101_010 = ("101", "010")
    Q3_110_001 = ("110", "001")
    Q3_100_011 = ("100", "011")
    Q4_1010_0101 = ("1010", "0101")

    def __init__(self, ket: str, bra: str):
        self.ket = ket
        self.bra = bra

    @property
    def n_qubits(self) -> int:
        return len(self.ket)

    @property
    def constraint_coeffs(self) -> tuple:
        """c_j = ((-1)^bra_j - (-1)^ket_j) / 2, one per qubit, each +-1."""
        return tuple(
            ((-1) ** int(b) - (-1) ** int(k)) // 2
            for k, b in zip(self.ket, self.bra)
        )

    @property
    def default_primary(self) -> tuple:
        return (0, 1)

    @property
    def default_secondary(self) -> tuple:
        return (1, 2) if self.n_qubits == 3 else (2, 3)


# every kind must flip every qubit, otherwise constraint_coeffs is ill-defined
for _kind in InteractionKind:
    assert all(k != b for k, b in zip(_kind.ket, _kind.bra)), _kind


@dataclass(frozen=True)
class QubitSpec:
    """One qubit: its level splitting and its private reservoir."""

    energy: float
    bath: BathSpec


@dataclass(frozen=True)
class SystemSpec:
    """Full network specification.

    primary/secondary name the qubit pairs (0-based) whose temperature
    differences define the input and output gradients of the transformer.
    zero_frequency_terms controls whether exact zero-frequency transitions
    contribute dephasing; for every interaction kind here the corresponding
    operators vanish identically, so the flag is inert in practice.
    """

    kind: InteractionKind
    g: float
    qubits: tuple
    primary: tuple = None
    secondary: tuple = None
    zero_frequency_terms: bool = True

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.primary is None:
            object.__setattr__(self, "primary", self.kind.default_primary)
        else:
            object.__setattr__(self, "primary", tuple(self.primary))
        if self.secondary is None:
            object.__setattr__(self, "secondary", self.kind.default_secondary)
        else:
            object.__setattr__(self, "secondary", tuple(self.secondary))

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def energies(self) -> np.ndarray:
        return np.array([q.energy for q in self.qubits])


@dataclass(frozen=True)
class Violation:
    constraint: str
    residual: float
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{v.constraint}: {v.message}" for v in self.violations)


def validate(spec: SystemSpec) -> ValidationReport:
    """Check every model constraint; reports all violations, never raises."""
    problems = []

    def bad(constraint, residual, message):
        problems.append(Violation(constraint, float(residual), message))

    n = spec.kind.n_qubits
    if len(spec.qubits) != n:
        bad("qubit_count", abs(len(spec.qubits) - n),
            f"{spec.kind.name} needs {n} qubits, got {len(spec.qubits)}")
        return ValidationReport(False, tuple(problems))

    if not spec.g > 0:
        bad("coupling_positive", abs(spec.g), f"g must be positive, got {spec.g}")

    for j, q in enumerate(spec.qubits):
        if abs(q.energy) <= ENERGY_FLOOR:
            bad(f"qubit{j + 1}_energy_nonzero", abs(q.energy),
                f"|energy| of qubit {j + 1} must exceed {ENERGY_FLOOR:g}")
        if q.bath.alpha < 0:
            bad(f"qubit{j + 1}_alpha_nonnegative", -q.bath.alpha,
                f"bath coupling of qubit {j + 1} is negative")
        if q.bath.cutoff <= 0:
            bad(f"qubit{j + 1}_cutoff_positive", abs(q.bath.cutoff),
                f"bath cutoff of qubit {j + 1} must be positive")
        if q.bath.temperature <= 0:
            bad(f"qubit{j + 1}_temperature_positive", abs(q.bath.temperature),
                f"bath temperature of qubit {j + 1} must be positive")

    coeffs = spec.kind.constraint_coeffs
    residual = abs(sum(c * q.energy for c, q in zip(coeffs, spec.qubits)))
    if residual > CONSTRAINT_TOL:
        terms = " + ".join(f"({c:+d})*{q.energy:g}" for c, q in zip(coeffs, spec.qubits))
        bad("energy_conservation", residual,
            f"interaction is off resonance: {terms} = {residual:g}, must vanish")

    for label, pair in (("primary", spec.primary), ("secondary", spec.secondary)):
        if len(pair) != 2 or pair[0] == pair[1]:
            bad(f"{label}_pair_distinct", 0.0, f"{label} junction must name two distinct qubits")
        elif not all(0 <= i < n for i in pair):
            bad(f"{label}_pair_range", 0.0, f"{label} junction {pair} out of range for {n} qubits")
    if tuple(sorted(spec.primary)) == tuple(sorted(spec.secondary)):
        bad("junctions_distinct", 0.0, "primary and secondary junctions coincide")

    return ValidationReport(not problems, tuple(problems))


def _bits_to_index(bits: str) -> int:
    return int(bits, 2)


def sigma_x_full(j: int, n: int) -> np.ndarray:
    """sigma_x on qubit j (0-based, big-endian) embedded in the n-qubit space."""
    return kron_all([SIGMA_X if k == j else np.eye(2) for k in range(n)])


def build_hamiltonian(spec: SystemSpec) -> np.ndarray:
    """Assemble H for a valid spec; raises InvalidSpecError otherwise."""
    report = validate(spec)
    if not report.ok:
        raise InvalidSpecError(f"invalid spec: {report.summary()}", report)
    n = spec.n_qubits
    dim = spec.dim
    h = np.zeros((dim, dim), dtype=complex)
    diag = np.zeros(dim)
    for idx in range(dim):
        for j, q in enumerate(spec.qubits):
            bit = (idx >> (n - 1 - j)) & 1
            diag[idx] += 0.5 * q.energy * (1 - 2 * bit)
    np.fill_diagonal(h, diag)
    k = _bits_to_index(spec.kind.ket)
    b = _bits_to_index(spec.kind.bra)
    h[k, b] += spec.g
    h[b, k] += spec.g
    return h


def gibbs_population(energy: float, temperature: float) -> float:
    """Thermal population of the |0> level: 1 / (1 + exp(energy / T))."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    x = energy / temperature
    if x >= 0:
        z = math.exp(-x)  # avoid overflow for large positive x
        return z / (1.0 + z)
    return 1.0 / (1.0 + math.exp(x))


def initial_state(spec: SystemSpec) -> DensityMatrix:
    """Product of single-qubit Gibbs states at the bath temperatures."""
    report = validate(spec)
    if not report.ok:
        raise InvalidSpecError(f"invalid spec: {report.summary()}", report)
    factors = []
    for q in spec.qubits:
        p = gibbs_population(q.energy, q.bath.temperature)
        factors.append(np.diag([p, 1.0 - p]).astype(complex))
    return DensityMatrix.from_matrix(kron_all(factors))


@dataclass(frozen=True)
class BiasReport:
    """Initial-state weights of the interaction's ket and bra states."""

    p_ket: float
    p_bra: float

    @property
    def biased_toward_ket(self) -> bool:
        return self.p_ket > self.p_bra


def bias_check(spec: SystemSpec) -> BiasReport:
    """Compare the thermal weights of |ket> and |bra|.

    Whichever basis state is heavier at t = 0 sets the initial direction of
    the resonant exchange, and with it which junction heats up first.
    """
    p_ket = 1.0
    p_bra = 1.0
    for bit_k, bit_b, q in zip(spec.kind.ket, spec.kind.bra, spec.qubits):
        p = gibbs_population(q.energy, q.bath.temperature)
        p_ket *= p if bit_k == "0" else 1.0 - p
        p_bra *= p if bit_b == "0" else 1.0 - p
    return BiasReport(p_ket, p_bra)
