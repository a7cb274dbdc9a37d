"""Validated density-matrix container."""

from dataclasses import dataclass, field

import numpy as np

from .errors import PhysicalityLostError
from .linalg import dagger, max_norm

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
EIGENVALUE_FLOOR = -1e-8


@dataclass
class DensityMatrix:
    """A square complex matrix checked against physicality tolerances.

    Hermitian within 1e-10 (max norm), unit trace within 1e-9, and no
    eigenvalue below -1e-8.  Construction validates by default; internal
    propagation code that validates on its own schedule can skip it.
    """

    matrix: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"density matrix must be square, got {self.matrix.shape}")
        self.dim = self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, matrix, check: bool = True) -> "DensityMatrix":
        rho = cls(matrix)
        if check:
            rho.validate()
        return rho

    def validate(self, where: str = "") -> "DensityMatrix":
        ctx = f" ({where})" if where else ""
        herm = max_norm(self.matrix - dagger(self.matrix))
        if herm > HERMITICITY_TOL:
            raise PhysicalityLostError(f"Hermiticity violated by {herm:.3e}{ctx}")
        tr = self.matrix.trace()
        drift = abs(tr - 1.0)
        if drift > TRACE_TOL:
            raise PhysicalityLostError(f"trace drifted to {tr:.12g}{ctx}")
        lo = float(np.linalg.eigvalsh((self.matrix + dagger(self.matrix)) / 2.0)[0])
        if lo < EIGENVALUE_FLOOR:
            raise PhysicalityLostError(f"negative eigenvalue {lo:.3e}{ctx}")
        return self

    def populations(self) -> np.ndarray:
        """Real diagonal of the matrix."""
        return np.real(np.diagonal(self.matrix)).copy()
