"""
Gate library: Toffoli expansions, single-control built-in expansions and
the V-chain multi-controlled X.

Every entry is checked against the simulator when the library is built;
a mismatch raises LibraryRegistrationError instead of producing a
silently wrong decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import pi
from typing import Mapping, Sequence

import numpy as np

from ..ancilla import using_aux
from ..classify import DiagonalSpec, GateClass, PermutationSpec, classify_matrix, relabel
from ..ir import (
    RY, GateKind, H, Instruction, P, QubitId, RZ, X, adjoint, apply, around, cx, mcx,
)
from ..numerics import TOL, controlled_matrix, gate_matrix, unitary


class LibraryRegistrationError(RuntimeError):
    pass


class DecompositionUnavailableError(LookupError):
    pass


@dataclass(frozen=True)
class GateLibraryEntry:
    id: str
    qubits: int
    exact: tuple[Instruction, ...]
    matrix: np.ndarray
    gate_class: GateClass
    approx: tuple[Instruction, ...] | None = None
    approx_matrix: np.ndarray | None = None
    approx_class: GateClass | None = None
    # approx == diag(exp(i * defect)) @ exact
    approx_defect: DiagonalSpec | None = None
    self_inverse: bool = False

    def expand(self, targets: Sequence[QubitId], approx: bool = False,
               dagger: bool = False) -> tuple[Instruction, ...]:
        if len(targets) != self.qubits:
            raise ValueError(f"{self.id} acts on {self.qubits} qubits, got {len(targets)}")
        body = self.approx if approx else self.exact
        if body is None:
            raise DecompositionUnavailableError(f"{self.id} has no approximate expansion")
        body = relabel(body, {QubitId(i): qb for i, qb in enumerate(targets)})
        return adjoint(body) if dagger else body


class GateLibrary(Mapping):
    def __init__(self, entries: Sequence[GateLibraryEntry]):
        self._entries = {e.id: e for e in entries}

    def __getitem__(self, key: str) -> GateLibraryEntry:
        return self._entries[key]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)


_Q0, _Q1, _Q2 = QubitId(0), QubitId(1), QubitId(2)

# T / T-dagger ladder with two Hadamards on the target
TOFFOLI_EXACT = (
    apply(H(), _Q2),
    cx(_Q1, _Q2),
    apply(P(-pi / 4), _Q2),
    cx(_Q0, _Q2),
    apply(P(pi / 4), _Q2),
    cx(_Q1, _Q2),
    apply(P(-pi / 4), _Q2),
    cx(_Q0, _Q2),
    apply(P(pi / 4), _Q1),
    apply(P(pi / 4), _Q2),
    apply(H(), _Q2),
    cx(_Q0, _Q1),
    apply(P(pi / 4), _Q0),
    apply(P(-pi / 4), _Q1),
    cx(_Q0, _Q1),
)

# relative-phase Toffoli: three CX between RY(-+pi/4) rotations on the target
TOFFOLI_RELATIVE_PHASE = (
    apply(RY(-pi / 4), _Q2),
    cx(_Q0, _Q2),
    apply(RY(-pi / 4), _Q2),
    cx(_Q1, _Q2),
    apply(RY(pi / 4), _Q2),
    cx(_Q0, _Q2),
    apply(RY(pi / 4), _Q2),
)

TOFFOLI_MATRIX = PermutationSpec((0, 1, 2, 3, 4, 5, 7, 6), (0.0,) * 8).matrix()
RELATIVE_PHASE_MATRIX = PermutationSpec(
    (0, 1, 2, 3, 4, 5, 7, 6), (0.0, 0.0, pi, 0.0, 0.0, 0.0, 0.0, 0.0)).matrix()
TOFFOLI_DEFECT = DiagonalSpec((0.0, 0.0, pi, 0.0, 0.0, 0.0, 0.0, 0.0))


def controlled_builtin(gate: GateKind, c: QubitId, t: QubitId) -> tuple[Instruction, ...]:
    """Exact expansion of a singly-controlled built-in into CX and 1-qubit gates."""
    name = gate.name
    th = gate.params[0] if gate.params else 0.0
    if name == "X":
        return (cx(c, t),)
    if name == "Z":
        return (apply(H(), t), cx(c, t), apply(H(), t))
    if name == "Y":
        return (apply(P(-pi / 2), t), cx(c, t), apply(P(pi / 2), t))
    if name == "H":
        return (apply(RY(pi / 4), t), cx(c, t), apply(RY(-pi / 4), t))
    if name == "RZ":
        return (apply(RZ(th / 2), t), cx(c, t), apply(RZ(-th / 2), t), cx(c, t))
    if name == "RY":
        return (apply(RY(th / 2), t), cx(c, t), apply(RY(-th / 2), t), cx(c, t))
    if name == "RX":
        return (apply(H(), t), apply(RZ(th / 2), t), cx(c, t),
                apply(RZ(-th / 2), t), cx(c, t), apply(H(), t))
    if name == "P":
        return (apply(P(th / 2), c), apply(P(th / 2), t), cx(c, t),
                apply(P(-th / 2), t), cx(c, t))
    raise DecompositionUnavailableError(f"no controlled expansion for {name}")


@using_aux(a=lambda c: int(len(c) > 2))
def v_chain(c: Sequence[QubitId], t: QubitId, *, a=(), ids) -> list[Instruction]:
    """Multi-controlled X: fold the first two controls into one aux per level."""
    if len(c) <= 2:
        return [mcx(c, t)]
    return [around([mcx(c[:2], a[0])], v_chain([a[0], *c[2:]], t, ids=ids))]


def _check(label: str, got: np.ndarray, want: np.ndarray) -> None:
    if got.shape != want.shape or np.max(np.abs(got - want)) > TOL:
        raise LibraryRegistrationError(f"{label}: simulated matrix does not match")


def register_library() -> GateLibrary:
    exact = unitary(TOFFOLI_EXACT, 3)
    approx = unitary(TOFFOLI_RELATIVE_PHASE, 3)
    _check("exact Toffoli", exact, TOFFOLI_MATRIX)
    _check("relative-phase Toffoli", approx, RELATIVE_PHASE_MATRIX)
    _check("Toffoli defect", approx, TOFFOLI_DEFECT.matrix() @ exact)
    _check("Toffoli inverse", exact @ exact, np.eye(8))
    _check("relative-phase inverse", approx @ approx, np.eye(8))

    ccx = GateLibraryEntry(
        id="ccx",
        qubits=3,
        exact=TOFFOLI_EXACT,
        matrix=TOFFOLI_MATRIX,
        gate_class=classify_matrix(TOFFOLI_MATRIX),
        approx=TOFFOLI_RELATIVE_PHASE,
        approx_matrix=RELATIVE_PHASE_MATRIX,
        approx_class=classify_matrix(RELATIVE_PHASE_MATRIX),
        approx_defect=TOFFOLI_DEFECT,
        self_inverse=True,
    )
    if not (ccx.gate_class.is_permutation and ccx.approx_class.is_permutation):
        raise LibraryRegistrationError("Toffoli variants must be permutation gates")

    for gate in (X(), GateKind("Y"), GateKind("Z"), H(), GateKind("RX", (0.37,)),
                 RY(-1.1), RZ(2.3), P(0.9)):
        got = unitary(controlled_builtin(gate, _Q0, _Q1), 2)
        _check(f"controlled {gate!r}", got, controlled_matrix(1, gate_matrix(gate)))

    return GateLibrary([ccx])


@lru_cache(maxsize=1)
def get_library() -> GateLibrary:
    return register_library()
