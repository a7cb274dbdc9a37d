"""Propagation and steady-state tests."""

import numpy as np
import pytest

from conftest import all_flip_spec, transient_spec
from qht.baths import BathSpec, decay_rate
from qht.dynamics import (
    Trajectory,
    _validate_sample,
    integrate_rk4,
    population_masks,
    populations_from_matrix,
    propagate_expm,
    propagate_expm_dense,
    steady_state,
    steady_temperatures,
)
from qht.errors import InvalidStepError, PhysicalityLostError
from qht.lindblad import (
    BohrDecomposition,
    JumpOperator,
    eigenoperators,
    liouvillian,
    liouvillian_matrix,
    rhs,
)
from qht.linalg import expm, hermitian_eig, max_norm, vec
from qht.model import SIGMA_X, gibbs_population


def single_qubit_decomposition(energy: float, bath: BathSpec) -> BohrDecomposition:
    """Hand-built one-qubit dissipator, bypassing the network spec layer."""
    h = np.diag([energy / 2.0, -energy / 2.0]).astype(complex)
    eigen = hermitian_eig(h)
    ops = eigenoperators(eigen, SIGMA_X)
    jumps = []
    lines = []
    for omega, a in ops:
        if max_norm(a) <= 1e-12:
            continue
        lines.append(omega)
        rate = decay_rate(omega, bath)
        if rate > 0.0:
            jumps.append(JumpOperator(0, omega, rate, a))
    return BohrDecomposition(h, eigen, 1, tuple(jumps), (tuple(sorted(lines)),))


def test_population_masks_convention():
    masks = population_masks(2)
    # qubit 0 is the most significant bit
    assert list(masks[0]) == [True, True, False, False]
    assert list(masks[1]) == [True, False, True, False]
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    pops = populations_from_matrix(rho, 2)
    assert np.allclose(pops, [0.7, 0.6])


def test_step_validation():
    spec = all_flip_spec()
    with pytest.raises(InvalidStepError):
        integrate_rk4(spec, 0.0)
    with pytest.raises(InvalidStepError):
        integrate_rk4(spec, 10.0, dt=0.0)
    with pytest.raises(InvalidStepError):
        integrate_rk4(spec, 10.0, dt=0.1)  # above the stability cap
    with pytest.raises(InvalidStepError):
        integrate_rk4(spec, 10.0, sample_every=0)
    with pytest.raises(InvalidStepError):
        propagate_expm(spec, -5.0)
    with pytest.raises(InvalidStepError):
        propagate_expm(spec, 10.0, n_samples=0)
    with pytest.raises(InvalidStepError):
        propagate_expm_dense(spec, 10.0, dense_span=10.0)


def test_single_qubit_relaxes_to_gibbs():
    bath = BathSpec(1e-3, 1e3, 1.7)
    dec = single_qubit_decomposition(1.3, bath)
    assert dec.frequencies[0] == (-1.3, 1.3)
    lv = liouvillian_matrix(dec.hamiltonian, dec.jumps)
    rho = np.diag([0.9, 0.1]).astype(complex)
    v = expm(lv * 1e5) @ vec(rho)
    final = v.reshape(2, 2, order="F")
    p = gibbs_population(1.3, 1.7)
    assert max_norm(final - np.diag([p, 1.0 - p])) < 1e-10


def test_single_qubit_gibbs_is_stationary():
    bath = BathSpec(1e-3, 1e3, 2.2)
    dec = single_qubit_decomposition(0.8, bath)
    p = gibbs_population(0.8, 2.2)
    gibbs = np.diag([p, 1.0 - p]).astype(complex)
    assert max_norm(rhs(gibbs, dec.hamiltonian, dec)) <= 1e-15


def test_trajectory_invariants_enforced():
    spec = all_flip_spec()
    good = dict(
        times=[0.0, 1.0],
        populations=[[0.3, 0.3, 0.7]] * 2,
        temperatures=[[1.0, 2.0, 3.0]] * 2,
        spec=spec,
        propagator="expm",
    )
    Trajectory(**good)
    with pytest.raises(ValueError):
        Trajectory(**{**good, "times": [1.0, 0.0]})
    with pytest.raises(ValueError):
        Trajectory(**{**good, "populations": [[0.3, 0.3]] * 2})
    with pytest.raises(ValueError):
        Trajectory(**{**good, "populations": [[0.0, 0.3, 0.7]] * 2})


def test_sample_validation_gate():
    ok = np.diag([0.6, 0.4]).astype(complex)
    out = _validate_sample(ok, 0.0)
    assert max_norm(out - ok) == 0.0
    # small trace drift is renormalized
    drifted = ok * (1.0 + 5e-10)
    out = _validate_sample(drifted, 1.0)
    assert abs(np.trace(out) - 1.0) < 1e-15
    with pytest.raises(PhysicalityLostError):
        _validate_sample(ok * 1.01, 1.0)  # trace drift beyond tolerance
    bad_h = ok + np.array([[0.0, 1e-8], [0.0, 0.0]])
    with pytest.raises(PhysicalityLostError):
        _validate_sample(bad_h, 1.0)
    negative = np.diag([1.1, -0.1]).astype(complex)
    with pytest.raises(PhysicalityLostError):
        _validate_sample(negative, 1.0)


def test_rk4_sampling_grid_and_states():
    spec = all_flip_spec()
    traj = integrate_rk4(spec, 2.5, dt=0.01, sample_every=100, store_states=True)
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(2.5)
    # marks at multiples of sample_every * dt plus the final partial block
    assert np.allclose(traj.times, [0.0, 1.0, 2.0, 2.5])
    assert traj.propagator.startswith("rk4/")
    assert len(traj.states) == traj.times.size
    for s in traj.states:
        assert s.matrix.shape == (8, 8)


def test_expm_uniform_grid():
    spec = all_flip_spec()
    traj = propagate_expm(spec, 10.0, n_samples=5)
    assert np.allclose(traj.times, [0.0, 2.0, 4.0, 6.0, 8.0, 10.0])
    assert traj.propagator == "expm"


def test_expm_dense_grid_structure():
    spec = all_flip_spec()
    traj = propagate_expm_dense(spec, 100.0, n_samples=10, dense_span=1.0, dense_dt=0.1)
    gaps = np.diff(traj.times)
    assert np.allclose(gaps[:10], 0.1)
    assert np.allclose(gaps[10:], 9.9)
    assert traj.times[-1] == pytest.approx(100.0)


def test_propagators_agree_on_short_horizon():
    spec = all_flip_spec()
    a = integrate_rk4(spec, 50.0, dt=0.01, sample_every=500)
    b = propagate_expm(spec, 50.0, n_samples=10)
    assert np.allclose(a.times, b.times)
    assert np.max(np.abs(a.populations - b.populations)) <= 1e-8


def test_steady_state_is_fixed_point():
    spec = all_flip_spec()
    rho, unique = steady_state(spec)
    assert unique
    lv = liouvillian(spec)
    assert max_norm((lv @ vec(rho.matrix)).reshape(8, 8)) <= 1e-9
    assert abs(np.trace(rho.matrix) - 1.0) <= 1e-12


def test_steady_temperatures_reference_values():
    pops, temps, unique = steady_temperatures(all_flip_spec())
    assert unique
    assert np.allclose(temps, [1.2239, 8.6692, 2.9932], atol=2e-4)
    pops5, temps5, unique5 = steady_temperatures(transient_spec())
    assert unique5
    assert np.allclose(temps5, [1.139226, 0.909867, 2.941854], atol=2e-5)
    # populations and temperatures are consistent
    for p, t, q in zip(pops5, temps5, transient_spec().qubits):
        assert p == pytest.approx(gibbs_population(q.energy, t), rel=1e-10)