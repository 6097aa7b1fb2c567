"""
Permutation / diagonal gate classes.

The lattice is DIAGONAL < PERMUTATION < GENERAL; a diagonal gate is a
permutation gate with the identity permutation, and GENERAL is always a
safe answer.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ir import (
    Apply, Around, AuxScope, Controlled, GateKind, Instruction, QubitId, qubits_of, walk,
)
from .numerics import TOL, unitary

FALLBACK_MAX_QUBITS = 8


class GateClass(enum.IntEnum):
    DIAGONAL = 0
    PERMUTATION = 1
    GENERAL = 2

    @property
    def is_permutation(self) -> bool:
        return self <= GateClass.PERMUTATION

    @property
    def is_diagonal(self) -> bool:
        return self is GateClass.DIAGONAL

    def join(self, other: GateClass) -> GateClass:
        return max(self, other)


class NotPermutationError(ValueError):
    pass


@dataclass(frozen=True)
class PermutationSpec:
    """P = sum_k exp(i phases[k]) |perm[k]><k|."""

    perm: tuple[int, ...]
    phases: tuple[float, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm is not a bijection")
        if len(self.phases) != len(self.perm):
            raise ValueError("one phase per basis state")

    def matrix(self) -> np.ndarray:
        d = len(self.perm)
        m = np.zeros((d, d), dtype=complex)
        m[list(self.perm), np.arange(d)] = np.exp(1j * np.asarray(self.phases))
        return m


@dataclass(frozen=True)
class DiagonalSpec:
    phases: tuple[float, ...]

    def __post_init__(self):
        n = len(self.phases)
        if n == 0 or n & (n - 1):
            raise ValueError("diagonal length must be a power of two")

    def matrix(self) -> np.ndarray:
        return np.diag(np.exp(1j * np.asarray(self.phases)))


_GATE_CLASS = {
    "X": GateClass.PERMUTATION,
    "Y": GateClass.PERMUTATION,
    "Z": GateClass.DIAGONAL,
    "RZ": GateClass.DIAGONAL,
    "P": GateClass.DIAGONAL,
    "H": GateClass.GENERAL,
    "RX": GateClass.GENERAL,
    "RY": GateClass.GENERAL,
}


def classify_gate(gate: GateKind) -> GateClass:
    if gate.builtin:
        return _GATE_CLASS[gate.name]
    from .passes.library import get_library

    entry = get_library().get(gate.name)
    if entry is None:
        raise KeyError(f"unknown gate {gate.name!r}")
    return entry.approx_class if gate.approx else entry.gate_class


def classify_matrix(u: np.ndarray, tol: float = TOL) -> GateClass:
    big = np.abs(u) > tol
    if not big[~np.eye(u.shape[0], dtype=bool)].any():
        return GateClass.DIAGONAL
    if (big.sum(axis=0) == 1).all() and (big.sum(axis=1) == 1).all():
        return GateClass.PERMUTATION
    return GateClass.GENERAL


def _structural(instrs: Sequence[Instruction]) -> GateClass:
    cls = GateClass.DIAGONAL
    for ins in instrs:
        cls = cls.join(_structural_one(ins))
        if cls is GateClass.GENERAL:
            break
    return cls


def _structural_one(ins: Instruction) -> GateClass:
    if isinstance(ins, Apply):
        return classify_gate(ins.gate)
    if isinstance(ins, (Controlled, AuxScope)):
        return _structural(ins.body)
    if isinstance(ins, Around):
        if not ins.body:
            return GateClass.DIAGONAL
        outer = _structural(ins.outer)
        if not outer.is_permutation:
            return GateClass.GENERAL
        # P^dag D P is diagonal; P^dag Q P is a permutation
        return _structural(ins.body)
    raise TypeError(f"not an instruction: {ins!r}")


def classify_instrs(instrs: Sequence[Instruction], fallback: bool = True,
                    max_qubits: int = FALLBACK_MAX_QUBITS) -> GateClass:
    """Class of the operator the sequence implements on the qubits it touches.

    Structural rules first; when they give up and ``fallback`` is set, the
    matrix is built for circuits of at most ``max_qubits`` qubits.
    """
    instrs = tuple(instrs)
    cls = _structural(instrs)
    if cls is not GateClass.GENERAL or not fallback:
        return cls
    if any(isinstance(i, AuxScope) for i in walk(instrs)):
        return cls
    qs = sorted(qubits_of(instrs), key=lambda qb: (qb.kind.value, qb.index))
    if len(qs) > max_qubits:
        return cls
    local = relabel(instrs, {qb: QubitId(i) for i, qb in enumerate(qs)})
    return classify_matrix(unitary(local, len(qs)))


def relabel(instrs: Sequence[Instruction], mapping: dict) -> tuple[Instruction, ...]:
    """Rename qubits; ones absent from ``mapping`` keep their id."""
    def m(qs):
        return tuple(mapping.get(qb, qb) for qb in qs)

    out = []
    for ins in instrs:
        if isinstance(ins, Apply):
            out.append(Apply(ins.gate, m(ins.targets)))
        elif isinstance(ins, Controlled):
            out.append(Controlled(m(ins.controls), relabel(ins.body, mapping)))
        elif isinstance(ins, Around):
            out.append(Around(relabel(ins.outer, mapping), relabel(ins.body, mapping)))
        elif isinstance(ins, AuxScope):
            out.append(AuxScope(m(ins.aux), relabel(ins.body, mapping)))
        else:
            raise TypeError(f"not an instruction: {ins!r}")
    return tuple(out)


def extract_permutation(u: np.ndarray, tol: float = TOL) -> PermutationSpec:
    big = np.abs(u) > tol
    if not ((big.sum(axis=0) == 1).all() and (big.sum(axis=1) == 1).all()):
        raise NotPermutationError("matrix needs exactly one significant entry per row and column")
    perm = tuple(int(np.flatnonzero(big[:, k])[0]) for k in range(u.shape[1]))
    phases = tuple(float(np.angle(u[perm[k], k])) for k in range(u.shape[1]))
    return PermutationSpec(perm, phases)


def basis_violations(instrs: Sequence[Instruction], qubits, path: tuple = (),
                     role: str = "protected") -> list[tuple[str, str]]:
    """Structural proof that ``instrs`` preserve the computational basis of ``qubits``.

    Accepted touches: diagonal gates, use as a control, and conjugation
    Around(A, B) where A is a permutation and B preserves the basis of
    ``qubits`` together with every qubit of A. Returns (path, reason) for
    each touch that cannot be justified; empty means proven.
    """
    qubits = frozenset(qubits)
    found: list[tuple[str, str]] = []
    for i, ins in enumerate(instrs):
        here = path + (i,)
        touched = qubits_of(ins) & qubits
        if not touched:
            continue
        if isinstance(ins, Apply):
            if classify_gate(ins.gate) is not GateClass.DIAGONAL:
                names = ", ".join(repr(qb) for qb in sorted(touched))
                found.append((format_path(here),
                              f"non-diagonal gate {ins.gate!r} targets {role} qubit {names} outside Around"))
        elif isinstance(ins, Controlled):
            found += basis_violations(ins.body, qubits, here + ("body",), role)
        elif isinstance(ins, AuxScope):
            found += basis_violations(ins.body, qubits, here + ("body",), role)
        elif isinstance(ins, Around):
            direct = (basis_violations(ins.outer, qubits, here + ("outer",), role)
                      + basis_violations(ins.body, qubits, here + ("body",), role))
            if not direct:
                continue
            if classify_instrs(ins.outer, fallback=False).is_permutation:
                wide = qubits | qubits_of(ins.outer)
                conj = basis_violations(ins.body, wide, here + ("body",), role)
                if not conj:
                    continue
                found += conj
            else:
                found += direct
        else:
            raise TypeError(f"not an instruction: {ins!r}")
    return found


def format_path(path: tuple) -> str:
    return "/".join(str(p) for p in path) or "."
