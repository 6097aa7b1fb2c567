import numpy as np
import pytest

from helpers import (
    random_diagonal, random_diagonal_instrs, random_instrs, random_permutation_instrs,
    random_signed_permutation, random_unitary,
)
from qaround.classify import (
    DiagonalSpec, GateClass, NotPermutationError, PermutationSpec, basis_violations,
    classify_gate, classify_instrs, classify_matrix, extract_permutation, relabel,
)
from qaround.ir import (
    RX, RZ, GateKind, H, P, X, Y, Z, apply, around, aux, controlled, cx, mcx, q,
)
from qaround.numerics import unitary


@pytest.mark.parametrize("gate,want", [
    (X(), GateClass.PERMUTATION), (Y(), GateClass.PERMUTATION),
    (Z(), GateClass.DIAGONAL), (RZ(0.3), GateClass.DIAGONAL), (P(0.3), GateClass.DIAGONAL),
    (H(), GateClass.GENERAL), (RX(0.3), GateClass.GENERAL),
    (GateKind("ccx"), GateClass.PERMUTATION),
    (GateKind("ccx", approx=True), GateClass.PERMUTATION),
])
def test_gate_classes(gate, want):
    assert classify_gate(gate) is want


def test_lattice_order():
    assert GateClass.DIAGONAL.is_permutation
    assert not GateClass.PERMUTATION.is_diagonal
    assert GateClass.DIAGONAL.join(GateClass.PERMUTATION) is GateClass.PERMUTATION
    assert GateClass.GENERAL.join(GateClass.DIAGONAL) is GateClass.GENERAL


def test_toffoli_is_permutation():
    assert classify_instrs([mcx([q(0), q(1)], q(2))]) is GateClass.PERMUTATION


def test_controlled_rz_is_diagonal():
    assert classify_instrs([controlled([q(0)], apply(RZ(0.4), q(1)))]) is GateClass.DIAGONAL


def test_hh_needs_the_matrix_fallback():
    hh = [apply(H(), q(0)), apply(H(), q(0))]
    assert classify_instrs(hh, fallback=False) is GateClass.GENERAL
    assert classify_instrs(hh).is_permutation


def test_around_of_permutation_keeps_body_class():
    outer = [cx(q(0), q(1)), apply(X(), q(0))]
    assert classify_instrs([around(outer, [apply(RZ(0.2), q(1))])]) is GateClass.DIAGONAL
    assert classify_instrs([around(outer, [cx(q(1), q(0))])]) is GateClass.PERMUTATION


def test_around_with_empty_body_is_diagonal():
    assert classify_instrs([around([apply(H(), q(0))], [])], fallback=False) is GateClass.DIAGONAL


def test_classify_matrix():
    assert classify_matrix(np.eye(4)) is GateClass.DIAGONAL
    assert classify_matrix(np.eye(4)[[1, 0, 2, 3]]) is GateClass.PERMUTATION
    assert classify_matrix(np.ones((2, 2)) / np.sqrt(2)) is GateClass.GENERAL


def test_extract_permutation_of_cnot():
    spec = extract_permutation(unitary([cx(q(0), q(1))], 2))
    assert spec.perm == (0, 1, 3, 2)
    assert np.allclose(spec.phases, 0)


def test_extract_permutation_of_y():
    spec = extract_permutation(unitary([apply(Y(), q(0))], 1))
    assert spec.perm == (1, 0)
    assert np.allclose(spec.phases, (np.pi / 2, -np.pi / 2))


def test_extract_permutation_rejects_general():
    with pytest.raises(NotPermutationError):
        extract_permutation(unitary([apply(H(), q(0))], 1))


def test_extract_permutation_round_trip(rng):
    for _ in range(100):
        dim = 2 ** int(rng.integers(1, 5))
        u = random_signed_permutation(rng, dim)
        assert np.allclose(extract_permutation(u).matrix(), u, atol=1e-9)


def test_spec_validation():
    with pytest.raises(ValueError):
        PermutationSpec((0, 0), (0.0, 0.0))
    with pytest.raises(ValueError):
        DiagonalSpec((0.0, 0.0, 0.0))
    assert np.allclose(DiagonalSpec((0.0, np.pi)).matrix(), np.diag([1, -1]))


def test_structural_claims_are_sound(rng):
    # whatever the structural rules assert must hold for the matrix
    qubits = [q(i) for i in range(4)]
    gens = (random_instrs, random_permutation_instrs, random_diagonal_instrs)
    for k in range(300):
        seq = gens[k % 3](rng, qubits, int(rng.integers(1, 8)))
        if rng.random() < 0.3:
            seq = [around(random_permutation_instrs(rng, qubits, 3), seq)]
        cls = classify_instrs(seq, fallback=False)
        got = classify_matrix(unitary(seq, 4))
        assert got <= cls, (seq, cls, got)


def test_fallback_is_exact_for_small_circuits(rng):
    qubits = [q(i) for i in range(3)]
    for _ in range(100):
        seq = random_instrs(rng, qubits, int(rng.integers(1, 6)))
        assert classify_instrs(seq) is classify_matrix(unitary(seq, 3))


def test_random_matrix_classes(rng):
    for _ in range(20):
        dim = 2 ** int(rng.integers(1, 4))
        assert classify_matrix(random_diagonal(rng, dim)) is GateClass.DIAGONAL
        assert classify_matrix(random_signed_permutation(rng, dim)).is_permutation
        assert classify_matrix(random_unitary(rng, dim)) is GateClass.GENERAL


def test_basis_violations_accepts_diagonal_and_control_use():
    a = aux(0)
    seq = [cx(a, q(1)), apply(RZ(0.2), a), controlled([a], apply(H(), q(1)))]
    assert basis_violations(seq, {a}) == []


def test_basis_violations_reports_path():
    a = aux(0)
    seq = [apply(X(), q(0)), controlled([q(0)], [apply(H(), a)])]
    found = basis_violations(seq, {a}, role="aux")
    assert len(found) == 1
    path, reason = found[0]
    assert path == "1/body/0"
    assert "targets aux qubit" in reason


def test_basis_violations_accepts_conjugation():
    a = aux(0)
    seq = [around([cx(q(0), a)], [apply(Z(), a)])]
    assert basis_violations(seq, {a}) == []


def test_basis_violations_rejects_conjugated_non_diagonal_body():
    # CX(m, a) around H(m) does not restore a, even though H never touches a
    a = aux(0)
    seq = [around([cx(q(0), a)], [apply(H(), q(0))])]
    assert basis_violations(seq, {a}) != []
    st = np.zeros(4)
    st[0] = 1
    assert not np.allclose(np.abs(unitary(relabel(seq, {a: q(1)}), 2) @ st)[[1, 3]], 0)

