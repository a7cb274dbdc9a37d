"""Time evolution and steady states.

Two independent propagation routes are kept deliberately:

* integrate_rk4 steps the operator-form generator directly (classical
  fixed-step RK4 on rhs), through the compiled kernel when available;
* propagate_expm exponentiates the column-stacked superoperator and
  iterates vec(rho) <- expm(L dt) vec(rho).

They share no numerical machinery beyond the Bohr decomposition, so their
agreement is a real consistency check rather than a tautology.  Both
validate physicality at every recorded sample: Hermiticity, spectrum, and
trace, renormalizing the trace when the drift is within tolerance and
aborting when it is not.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backends
from .errors import InvalidSpecError, InvalidStepError, PhysicalityLostError
from .linalg import dagger, expm, max_norm, null_vector, unvec, vec
from .lindblad import decompose, liouvillian_matrix
from .metrics import local_temperatures
from .model import SystemSpec, initial_state
from .state import DensityMatrix, EIGENVALUE_FLOOR, HERMITICITY_TOL, TRACE_TOL

MAX_DT = 0.05
DEFAULT_DT = 0.01
DEFAULT_SAMPLES = 5000
TRANSIENT_SPAN = 50.0


def population_masks(n_qubits: int) -> np.ndarray:
    """masks[j, idx] is True when basis state idx has bit j = 0 (big-endian)."""
    dim = 2**n_qubits
    idx = np.arange(dim)
    return np.array([(idx >> (n_qubits - 1 - j)) & 1 == 0 for j in range(n_qubits)])


def populations_from_matrix(rho: np.ndarray, n_qubits: int) -> np.ndarray:
    diag = np.real(np.diagonal(rho))
    return population_masks(n_qubits) @ diag


@dataclass
class Trajectory:
    """Sampled evolution: times, per-qubit populations and temperatures.

    populations[i, j] is the |0>-level population of qubit j at times[i];
    temperatures[i, j] the corresponding local temperature.  states holds
    the full density matrices only when requested.
    """

    times: np.ndarray
    populations: np.ndarray
    temperatures: np.ndarray
    spec: SystemSpec
    propagator: str
    states: list = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.populations = np.asarray(self.populations, dtype=float)
        self.temperatures = np.asarray(self.temperatures, dtype=float)
        if self.times.ndim != 1 or np.any(np.diff(self.times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        n = len(self.spec.qubits)
        if self.populations.shape != (self.times.size, n):
            raise ValueError("populations shape does not match times and qubit count")
        if self.temperatures.shape != self.populations.shape:
            raise ValueError("temperatures shape does not match populations")
        if np.any(self.populations <= 0.0) or np.any(self.populations >= 1.0):
            raise ValueError("populations must stay strictly inside (0, 1)")

    @property
    def n_qubits(self) -> int:
        return len(self.spec.qubits)


class _Recorder:
    def __init__(self, spec, propagator, store_states):
        self.spec = spec
        self.propagator = propagator
        self.masks = population_masks(len(spec.qubits))
        self.energies = spec.energies
        self.times = []
        self.pops = []
        self.states = [] if store_states else None

    def add(self, t, rho):
        self.times.append(t)
        self.pops.append(self.masks @ np.real(np.diagonal(rho)))
        if self.states is not None:
            self.states.append(DensityMatrix.from_matrix(rho.copy(), check=False))

    def trajectory(self) -> Trajectory:
        pops = np.array(self.pops)
        temps = local_temperatures(pops, self.energies)
        return Trajectory(
            times=np.array(self.times),
            populations=pops,
            temperatures=temps,
            spec=self.spec,
            propagator=self.propagator,
            states=self.states,
        )


def _validate_sample(rho: np.ndarray, t: float) -> np.ndarray:
    """Physicality gate applied at every recorded sample.

    Renormalizes the trace when the drift is within TRACE_TOL; anything
    worse, or Hermiticity/positivity loss, aborts the run.
    """
    herm = max_norm(rho - dagger(rho))
    if herm > HERMITICITY_TOL:
        raise PhysicalityLostError(f"Hermiticity violated by {herm:.3e} at t={t:g}")
    tr = rho.trace()
    drift = abs(tr - 1.0)
    if drift > TRACE_TOL:
        raise PhysicalityLostError(f"trace drifted by {drift:.3e} at t={t:g}")
    if drift > 0.0:
        rho = rho / tr
    lo = float(np.linalg.eigvalsh((rho + dagger(rho)) / 2.0)[0])
    if lo < EIGENVALUE_FLOOR:
        raise PhysicalityLostError(f"negative eigenvalue {lo:.3e} at t={t:g}")
    return rho


def integrate_rk4(
    spec: SystemSpec,
    t_final: float,
    dt: float = DEFAULT_DT,
    sample_every: int = 100,
    store_states: bool = False,
) -> Trajectory:
    """Fixed-step RK4 on the operator-form generator.

    The step is capped at MAX_DT: the fastest phases rotate at the largest
    Bohr frequency and RK4 needs several points per radian to hold the
    populations to 1e-5 over long horizons.
    """
    if not t_final > 0:
        raise InvalidStepError(f"t_final must be positive, got {t_final}")
    if not 0 < dt <= MAX_DT:
        raise InvalidStepError(f"dt must lie in (0, {MAX_DT}], got {dt}")
    if sample_every < 1:
        raise InvalidStepError(f"sample_every must be >= 1, got {sample_every}")
    n_steps = round(t_final / dt)
    if n_steps < 1:
        raise InvalidStepError(f"t_final={t_final} shorter than one step dt={dt}")

    dec = decompose(spec)
    problem = _backends.prepare(dec.hamiltonian, dec.jumps)
    rho = np.ascontiguousarray(initial_state(spec).matrix)

    rec = _Recorder(spec, f"rk4/{_backends.BACKEND}", store_states)
    rec.add(0.0, _validate_sample(rho, 0.0))

    marks = list(range(sample_every, n_steps + 1, sample_every))
    if not marks or marks[-1] != n_steps:
        marks.append(n_steps)
    done = 0
    for mark in marks:
        _backends.rk4_advance(problem, rho, dt, mark - done)
        done = mark
        t = done * dt
        rho = np.ascontiguousarray(_validate_sample(rho, t))
        rec.add(t, rho)
    return rec.trajectory()


def _propagate_blocks(spec, blocks, store_states=False) -> Trajectory:
    """Superoperator route over piecewise-uniform time grids.

    blocks is a sequence of (step, count) pairs; one matrix exponential is
    computed per distinct step size and reused across its block.
    """
    dec = decompose(spec)
    lv = liouvillian_matrix(dec.hamiltonian, dec.jumps)
    dim = spec.dim
    rho0 = initial_state(spec).matrix

    rec = _Recorder(spec, "expm", store_states)
    rec.add(0.0, _validate_sample(rho0, 0.0))

    v = vec(rho0).astype(complex)
    cache = {}
    t_base = 0.0
    for step, count in blocks:
        if not step > 0 or count < 1:
            raise InvalidStepError(f"bad sampling block (step={step}, count={count})")
        if step not in cache:
            cache[step] = expm(lv * step)
        e = cache[step]
        for i in range(1, count + 1):
            v = e @ v
            t = t_base + i * step
            rho = _validate_sample(unvec(v, dim), t)
            v = vec(rho)
            rec.add(t, rho)
        t_base += count * step
    return rec.trajectory()


def propagate_expm(
    spec: SystemSpec,
    t_final: float,
    n_samples: int = DEFAULT_SAMPLES,
    store_states: bool = False,
) -> Trajectory:
    """Evolve on a uniform grid of n_samples+1 points including t=0."""
    if not t_final > 0:
        raise InvalidStepError(f"t_final must be positive, got {t_final}")
    if n_samples < 1:
        raise InvalidStepError(f"n_samples must be >= 1, got {n_samples}")
    return _propagate_blocks(spec, [(t_final / n_samples, n_samples)], store_states)


def propagate_expm_dense(
    spec: SystemSpec,
    t_final: float,
    n_samples: int = DEFAULT_SAMPLES,
    dense_span: float = TRANSIENT_SPAN,
    dense_dt: float = DEFAULT_DT,
    store_states: bool = False,
) -> Trajectory:
    """Uniform grid preceded by a finely sampled initial stretch.

    Transient features (gradient crossings near t=0) can live well below
    the uniform sampling interval of a long run, so classification samples
    [0, dense_span] at dense_dt resolution before switching to the coarse
    grid.
    """
    if not 0 < dense_span < t_final:
        raise InvalidStepError(f"dense_span must lie in (0, t_final), got {dense_span}")
    dense_count = max(1, round(dense_span / dense_dt))
    coarse = (t_final - dense_count * dense_dt) / n_samples
    return _propagate_blocks(
        spec, [(dense_dt, dense_count), (coarse, n_samples)], store_states
    )


def steady_state(spec: SystemSpec):
    """Kernel of the superoperator, normalized: (DensityMatrix, unique).

    Uniqueness is reported, not enforced; a degenerate kernel means the
    network splits into disconnected invariant sectors and any mixture of
    their fixed points is stationary.
    """
    dec = decompose(spec)
    if not dec.jumps:
        raise InvalidSpecError("no dissipative channels: every state is stationary up to phases")
    lv = liouvillian_matrix(dec.hamiltonian, dec.jumps)
    v, nullity = null_vector(lv, tol=1e-9)
    rho = unvec(v, spec.dim)
    tr = rho.trace()
    if abs(tr) < 1e-9:
        raise PhysicalityLostError("null vector has vanishing trace; not a state")
    rho = rho / tr  # fixes both the scale and the arbitrary global phase
    rho = (rho + dagger(rho)) / 2.0
    return DensityMatrix.from_matrix(rho), nullity == 1


def steady_temperatures(spec: SystemSpec):
    """Per-qubit populations and temperatures of the steady state."""
    rho, unique = steady_state(spec)
    pops = populations_from_matrix(rho.matrix, spec.n_qubits)
    return pops, local_temperatures(pops, spec.energies), unique
