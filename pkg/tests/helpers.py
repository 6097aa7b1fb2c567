"""Random circuit and matrix generators shared by the tests."""
import numpy as np

from qaround.ir import (
    Apply, AuxScope, Circuit, GateKind, X, apply, around, aux, controlled, cx, mcx, q,
)

ONE_QUBIT = ("X", "Y", "Z", "H", "RX", "RY", "RZ", "P")
DIAGONAL = ("Z", "RZ", "P")

# one summary line per acceptance criterion, printed by conftest
ACCEPTANCE = []


def random_gate(rng, names=ONE_QUBIT) -> GateKind:
    name = str(rng.choice(names))
    if name in ("RX", "RY", "RZ", "P"):
        return GateKind(name, (float(rng.uniform(-2 * np.pi, 2 * np.pi)),))
    return GateKind(name)


def random_qubits(rng, pool, k):
    idx = rng.choice(len(pool), size=k, replace=False)
    return [pool[i] for i in idx]


def random_instrs(rng, qubits, depth, nest=2, library=False):
    """Random tree over ``qubits`` with controls, conjugations and (optionally) Toffolis."""
    out = []
    for _ in range(depth):
        r = rng.random()
        if nest > 0 and r < 0.15 and len(qubits) >= 2:
            k = int(rng.integers(1, min(3, len(qubits) - 1) + 1))
            ctrls = random_qubits(rng, qubits, k)
            rest = [x for x in qubits if x not in ctrls]
            body = random_instrs(rng, rest, int(rng.integers(1, 4)), nest - 1, library)
            out.append(controlled(ctrls, body))
        elif nest > 0 and r < 0.3:
            outer = random_instrs(rng, qubits, int(rng.integers(0, 3)), nest - 1, library)
            body = random_instrs(rng, qubits, int(rng.integers(0, 3)), nest - 1, library)
            out.append(around(outer, body))
        elif library and r < 0.4 and len(qubits) >= 3:
            a, b, c = random_qubits(rng, qubits, 3)
            out.append(Apply(GateKind("ccx", approx=bool(rng.random() < 0.5)), (a, b, c)))
        elif r < 0.5 and len(qubits) >= 2:
            c, t = random_qubits(rng, qubits, 2)
            out.append(cx(c, t))
        else:
            out.append(apply(random_gate(rng), random_qubits(rng, qubits, 1)[0]))
    return out


def random_permutation_instrs(rng, qubits, depth):
    """Structurally-permutation sequence: X, Y, CX, Toffoli and diagonal phases."""
    out = []
    for _ in range(depth):
        r = rng.random()
        if r < 0.3 and len(qubits) >= 3:
            a, b, c = random_qubits(rng, qubits, 3)
            out.append(mcx([a, b], c))
        elif r < 0.55 and len(qubits) >= 2:
            c, t = random_qubits(rng, qubits, 2)
            out.append(cx(c, t))
        elif r < 0.75:
            out.append(apply(GateKind(str(rng.choice(["X", "Y"]))), random_qubits(rng, qubits, 1)[0]))
        else:
            out.append(apply(random_gate(rng, DIAGONAL), random_qubits(rng, qubits, 1)[0]))
    return out


def random_diagonal_instrs(rng, qubits, depth):
    out = []
    for _ in range(depth):
        if rng.random() < 0.4 and len(qubits) >= 2:
            c, t = random_qubits(rng, qubits, 2)
            out.append(controlled([c], apply(random_gate(rng, DIAGONAL), t)))
        else:
            out.append(apply(random_gate(rng, DIAGONAL), random_qubits(rng, qubits, 1)[0]))
    return out


def random_signed_permutation(rng, dim):
    m = np.zeros((dim, dim), dtype=complex)
    m[rng.permutation(dim), np.arange(dim)] = np.exp(1j * rng.uniform(0, 2 * np.pi, dim))
    return m


def random_diagonal(rng, dim):
    return np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, dim)))


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    qm, r = np.linalg.qr(z)
    return qm * (np.diag(r) / np.abs(np.diag(r)))


def uncompute_shaped_circuit(rng, case):
    """Controlled permutation P on the aux, diagonal D, then aux-controlled U, in one scope.

    Case 1 uses P = X on every aux qubit (|0..0> -> |1..1>); case 2 drops the
    bit flips so P fixes |0..0>.
    """
    n, m, k = int(rng.integers(1, 3)), int(rng.integers(0, 3)), int(rng.integers(1, 4))
    psi = [q(i) for i in range(n)]
    phi = [q(n + i) for i in range(m)]
    alpha = [aux(i) for i in range(k)]
    if case == 1:
        p = [apply(X(), a) for a in alpha]
    else:
        p = [i for i in random_permutation_instrs(rng, alpha, 4)
             if not (isinstance(i, Apply) and i.gate.name in ("X", "Y"))]
    body = random_diagonal_instrs(rng, alpha, 3)
    if phi:
        body.append(controlled(alpha, random_instrs(rng, phi, 3)))
    scope = AuxScope(tuple(alpha), (around([controlled(psi, p)] if p else [], body),))
    return Circuit(n + m, [scope])
