"""System definition, Hamiltonian, and initial-state tests."""

import numpy as np
import pytest

from conftest import all_flip_spec, four_qubit_spec, make_spec, middle_flip_spec
from qht.errors import InvalidSpecError
from qht.linalg import max_norm
from qht.model import (
    InteractionKind,
    bias_check,
    build_hamiltonian,
    gibbs_population,
    initial_state,
    sigma_x_full,
    validate,
)


def test_interaction_kind_metadata():
    k = InteractionKind.Q3_111_000
    assert k.n_qubits == 3
    assert k.constraint_coeffs == (1, 1, 1)
    m = InteractionKind.Q3_101_010
    assert m.constraint_coeffs == (1, -1, 1)
    q = InteractionKind.Q4_1010_0101
    assert q.n_qubits == 4
    assert q.constraint_coeffs == (1, -1, 1, -1)


def test_default_junctions():
    assert InteractionKind.Q3_111_000.default_primary == (0, 1)
    assert InteractionKind.Q3_111_000.default_secondary == (1, 2)
    assert InteractionKind.Q4_1010_0101.default_secondary == (2, 3)


@pytest.mark.parametrize(
    "builder", [all_flip_spec, middle_flip_spec, four_qubit_spec]
)
def test_validate_accepts_reference_networks(builder):
    report = validate(builder())
    assert report.ok
    assert report.violations == ()


def test_validate_rejects_unbalanced_energies():
    # all-flip with e = (1, 2, 3): residual is 1 + 2 + 3 = 6
    spec = make_spec(
        InteractionKind.Q3_111_000,
        0.5,
        (1.0, 2.0, 3.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, 3.0),
    )
    report = validate(spec)
    assert not report.ok
    residuals = [
        v.residual for v in report.violations if v.constraint == "energy_conservation"
    ]
    assert residuals and abs(residuals[0] - 6.0) < 1e-12


def test_validate_rejects_nonpositive_coupling():
    spec = make_spec(
        InteractionKind.Q3_111_000,
        0.0,
        (1.0, 2.0, -3.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, 3.0),
    )
    report = validate(spec)
    assert not report.ok
    assert any(v.constraint == "coupling_positive" for v in report.violations)


def test_validate_rejects_degenerate_qubit():
    spec = make_spec(
        InteractionKind.Q3_101_010,
        0.5,
        (1.0, 1e-12, 1.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, 3.0),
    )
    report = validate(spec)
    assert not report.ok
    assert any(v.constraint == "qubit2_energy_nonzero" for v in report.violations)


def test_validate_rejects_identical_junctions():
    spec = make_spec(
        InteractionKind.Q3_111_000,
        0.5,
        (1.0, 2.0, -3.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, 3.0),
        primary=(0, 1),
        secondary=(0, 1),
    )
    report = validate(spec)
    assert not report.ok
    assert any(v.constraint == "junctions_distinct" for v in report.violations)


def test_validate_reports_all_violations_at_once():
    spec = make_spec(
        InteractionKind.Q3_111_000,
        -1.0,
        (1.0, 2.0, 3.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, -1.0),
    )
    report = validate(spec)
    names = {v.constraint for v in report.violations}
    assert {"coupling_positive", "energy_conservation", "qubit3_temperature_positive"} <= names


def test_build_hamiltonian_spectrum_without_coupling():
    # at g ~ 0+ the spectrum approaches the bare splittings
    spec = make_spec(
        InteractionKind.Q3_111_000,
        1e-12,
        (1.0, 2.0, -3.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, 3.0),
    )
    h = build_hamiltonian(spec)
    vals = np.sort(np.linalg.eigvalsh(h))
    expect = np.sort(
        [
            0.5 * (s1 * 1.0 + s2 * 2.0 + s3 * -3.0)
            for s1 in (1, -1)
            for s2 in (1, -1)
            for s3 in (1, -1)
        ]
    )
    assert np.allclose(vals, expect, atol=1e-9)


def test_build_hamiltonian_spectrum_with_coupling(gallery_spec):
    spec = gallery_spec("fig2_p1")
    h = build_hamiltonian(spec)
    vals = np.sort(np.linalg.eigvalsh(h))
    # the resonant pair sits at bare energy 0 and splits by 2g = 1
    expect = np.sort([-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0])
    assert np.allclose(vals, expect, atol=1e-12)


def test_hamiltonian_coupling_element():
    spec = all_flip_spec()
    h = build_hamiltonian(spec)
    ket = int("111", 2)
    bra = int("000", 2)
    assert h[ket, bra] == pytest.approx(0.5)
    assert h[bra, ket] == pytest.approx(0.5)
    off = h - np.diag(np.diag(h))
    assert np.count_nonzero(off) == 2


def test_hamiltonian_diagonal_convention():
    # |0> is the +1 eigenstate of sz, so state 000 carries energy (e1+e2+e3)/2
    spec = all_flip_spec()
    h = build_hamiltonian(spec)
    assert h[0, 0] == pytest.approx(0.5 * (1.0 + 2.0 - 3.0))
    assert h[-1, -1] == pytest.approx(-0.5 * (1.0 + 2.0 - 3.0))


def test_build_hamiltonian_rejects_invalid_spec():
    spec = make_spec(
        InteractionKind.Q3_111_000,
        0.5,
        (1.0, 2.0, 3.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, 3.0),
    )
    with pytest.raises(InvalidSpecError) as exc:
        build_hamiltonian(spec)
    assert exc.value.report is not None
    assert not exc.value.report.ok


def test_sigma_x_full_placement():
    op = sigma_x_full(1, 3)
    assert op.shape == (8, 8)
    # flips bit 1 (big-endian): 000 <-> 010
    assert op[int("010", 2), 0] == 1.0
    assert op[0, int("010", 2)] == 1.0
    assert np.count_nonzero(op) == 8


def test_gibbs_population_values_and_errors():
    assert gibbs_population(1.0, 1.0) == pytest.approx(0.2689414213699951, rel=1e-14)
    assert gibbs_population(-1.0, 1.0) == pytest.approx(0.7310585786300049, rel=1e-14)
    # large positive splitting at low temperature underflows instead of overflowing
    assert gibbs_population(800.0, 1.0) == pytest.approx(0.0, abs=1e-300)
    with pytest.raises(ValueError):
        gibbs_population(1.0, 0.0)
    with pytest.raises(ValueError):
        gibbs_population(1.0, -1.0)


def test_initial_state_is_thermal_product():
    spec = all_flip_spec()
    rho = initial_state(spec)
    assert rho.matrix.shape == (8, 8)
    assert np.trace(rho.matrix) == pytest.approx(1.0, abs=1e-14)
    diag = np.diag(rho.matrix).real
    p = [gibbs_population(q.energy, q.bath.temperature) for q in spec.qubits]
    # p is the |0> weight, so basis state 000 carries the product of the p's
    assert diag[0] == pytest.approx(p[0] * p[1] * p[2], rel=1e-13)
    assert diag[-1] == pytest.approx((1 - p[0]) * (1 - p[1]) * (1 - p[2]), rel=1e-13)
    off = rho.matrix - np.diag(np.diag(rho.matrix))
    assert max_norm(off) == 0.0


def test_bias_check_reference_network():
    report = bias_check(all_flip_spec())
    p1 = gibbs_population(1.0, 1.0)
    p2 = gibbs_population(2.0, 2.0)
    p3 = gibbs_population(-3.0, 3.0)
    assert report.p_ket == pytest.approx((1 - p1) * (1 - p2) * (1 - p3), rel=1e-14)
    assert report.p_bra == pytest.approx(p1 * p2 * p3, rel=1e-14)
    assert report.p_ket == pytest.approx(0.1437, abs=5e-5)
    assert report.p_bra == pytest.approx(0.0529, abs=5e-5)
    assert report.biased_toward_ket
