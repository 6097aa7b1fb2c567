"""
Circuit intermediate representation.

Contains:
    - QubitId: main or (unresolved) auxiliary qubit reference
    - GateKind: built-in single-qubit gate or registered library gate
    - Apply / Controlled / Around / AuxScope: the instruction tree
    - Circuit: a named, immutable instruction sequence over a register
    - adjoint(), controlled(), around(): builders

Qubit 0 is the most significant bit of every basis-state label.
All nodes are frozen; passes build new trees instead of mutating.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union


class IRError(ValueError):
    pass


class OverlapError(IRError):
    """A control qubit is also acted on inside the controlled body."""


class QubitKind(enum.Enum):
    MAIN = "main"
    AUX = "aux"


@dataclass(frozen=True, order=True)
class QubitId:
    index: int
    kind: QubitKind = QubitKind.MAIN

    def __post_init__(self):
        if self.index < 0:
            raise IRError(f"negative qubit index {self.index}")

    @property
    def is_aux(self) -> bool:
        return self.kind is QubitKind.AUX

    def __repr__(self):
        return f"{'a' if self.is_aux else 'q'}{self.index}"


def q(index: int) -> QubitId:
    return QubitId(index)


def aux(index: int) -> QubitId:
    return QubitId(index, QubitKind.AUX)


BUILTIN_GATES = ("X", "Y", "Z", "H", "RX", "RY", "RZ", "P")
PARAM_GATES = frozenset({"RX", "RY", "RZ", "P"})
SELF_INVERSE = frozenset({"X", "Y", "Z", "H"})


@dataclass(frozen=True)
class GateKind:
    """A gate name plus angles.

    Library gates (anything not in BUILTIN_GATES) may additionally select
    their approximate expansion (``approx``) or their inverse (``dagger``).
    """

    name: str
    params: tuple[float, ...] = ()
    approx: bool = False
    dagger: bool = False

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.builtin:
            want = 1 if self.name in PARAM_GATES else 0
            if len(self.params) != want:
                raise IRError(f"{self.name} takes {want} angle(s), got {len(self.params)}")
            if self.approx or self.dagger:
                raise IRError("approx/dagger flags apply to library gates only")

    @property
    def builtin(self) -> bool:
        return self.name in BUILTIN_GATES

    def inverse(self) -> GateKind:
        if self.name in SELF_INVERSE:
            return self
        if self.builtin:
            return GateKind(self.name, tuple(-p for p in self.params))
        from .passes.library import get_library

        entry = get_library().get(self.name)
        if entry is not None and entry.self_inverse:
            return self
        return GateKind(self.name, self.params, self.approx, not self.dagger)

    def __repr__(self):
        s = self.name
        if self.params:
            s += "(" + ", ".join(f"{p:.6g}" for p in self.params) + ")"
        if self.approx:
            s += "~"
        if self.dagger:
            s += "†"
        return s


def X() -> GateKind:
    return GateKind("X")


def Y() -> GateKind:
    return GateKind("Y")


def Z() -> GateKind:
    return GateKind("Z")


def H() -> GateKind:
    return GateKind("H")


def RX(theta: float) -> GateKind:
    return GateKind("RX", (theta,))


def RY(theta: float) -> GateKind:
    return GateKind("RY", (theta,))


def RZ(theta: float) -> GateKind:
    return GateKind("RZ", (theta,))


def P(theta: float) -> GateKind:
    return GateKind("P", (theta,))


@dataclass(frozen=True)
class Apply:
    gate: GateKind
    targets: tuple[QubitId, ...]

    def __post_init__(self):
        targets = _qubits(self.targets)
        object.__setattr__(self, "targets", targets)
        if len(set(targets)) != len(targets):
            raise IRError(f"repeated target in {targets}")
        if self.gate.builtin and len(targets) != 1:
            raise IRError(f"{self.gate.name} acts on exactly one qubit")


@dataclass(frozen=True)
class Controlled:
    controls: tuple[QubitId, ...]
    body: tuple[Instruction, ...]

    def __post_init__(self):
        controls = _qubits(self.controls)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "body", tuple(self.body))
        if not controls:
            raise IRError("Controlled needs at least one control")
        if len(set(controls)) != len(controls):
            raise IRError(f"repeated control in {controls}")
        clash = set(controls) & qubits_of(self.body)
        if clash:
            raise OverlapError(f"control qubit(s) {sorted(clash)} also used in the body")


@dataclass(frozen=True)
class Around:
    """``outer; body; adjoint(outer)``. The uncompute half is never stored."""

    outer: tuple[Instruction, ...]
    body: tuple[Instruction, ...]

    def __post_init__(self):
        object.__setattr__(self, "outer", tuple(self.outer))
        object.__setattr__(self, "body", tuple(self.body))


@dataclass(frozen=True)
class AuxScope:
    aux: tuple[QubitId, ...]
    body: tuple[Instruction, ...]

    def __post_init__(self):
        qs = _qubits(self.aux)
        object.__setattr__(self, "aux", qs)
        object.__setattr__(self, "body", tuple(self.body))
        if any(not a.is_aux for a in qs):
            raise IRError("AuxScope declares main qubits")
        if len(set(qs)) != len(qs):
            raise IRError(f"repeated aux qubit in {qs}")


Instruction = Union[Apply, Controlled, Around, AuxScope]


@dataclass(frozen=True)
class Circuit:
    num_main: int
    instructions: tuple[Instruction, ...]
    name: str = "circuit"
    # concrete clean aux qubits num_main .. num_main+num_aux-1 (after resolution)
    num_aux: int = 0

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        validate(self)

    @property
    def num_qubits(self) -> int:
        return self.num_main + self.num_aux

    def replace(self, instructions: Iterable[Instruction], **kw) -> Circuit:
        args = dict(num_main=self.num_main, name=self.name, num_aux=self.num_aux)
        args.update(kw)
        return Circuit(instructions=tuple(instructions), **args)


def _qubits(seq) -> tuple[QubitId, ...]:
    if isinstance(seq, QubitId):
        return (seq,)
    return tuple(QubitId(s) if isinstance(s, int) else s for s in seq)


def walk(instrs: Sequence[Instruction]) -> Iterator[Instruction]:
    """Pre-order traversal of every node (outer before body for Around)."""
    for ins in instrs:
        yield ins
        if isinstance(ins, Apply):
            continue
        if isinstance(ins, Around):
            yield from walk(ins.outer)
        yield from walk(ins.body)


def qubits_of(instrs: Sequence[Instruction] | Instruction) -> frozenset[QubitId]:
    """Every qubit an instruction reads or writes (controls included)."""
    if not isinstance(instrs, (list, tuple)):
        instrs = (instrs,)
    found = set()
    for ins in walk(instrs):
        if isinstance(ins, Apply):
            found.update(ins.targets)
        elif isinstance(ins, Controlled):
            found.update(ins.controls)
        elif isinstance(ins, AuxScope):
            found.update(ins.aux)
    return frozenset(found)


def validate(circuit: Circuit) -> None:
    """Check qubit ranges and aux scoping; raise IRError on the first problem."""
    top = circuit.num_qubits

    def check(instrs, in_scope: frozenset):
        for ins in instrs:
            if isinstance(ins, Apply):
                used = ins.targets
            elif isinstance(ins, Controlled):
                used = ins.controls
            else:
                used = ()
            for qb in used:
                if qb.is_aux:
                    if qb not in in_scope:
                        raise IRError(f"aux qubit {qb!r} referenced outside its scope")
                elif qb.index >= top:
                    raise IRError(f"qubit {qb!r} outside register of {top}")
            if isinstance(ins, Around):
                check(ins.outer, in_scope)
                check(ins.body, in_scope)
            elif isinstance(ins, Controlled):
                check(ins.body, in_scope)
            elif isinstance(ins, AuxScope):
                clash = in_scope & set(ins.aux)
                if clash:
                    raise IRError(f"aux qubit(s) {sorted(clash)} redeclared in nested scope")
                check(ins.body, in_scope | set(ins.aux))

    check(circuit.instructions, frozenset())


def adjoint(instrs: Sequence[Instruction]) -> tuple[Instruction, ...]:
    """Reverse the sequence and invert every gate.

    An Around keeps its shape: adjoint(Around(o, b)) == Around(o, adjoint(b)).
    """
    return tuple(_adjoint_one(ins) for ins in reversed(tuple(instrs)))


def _adjoint_one(ins: Instruction) -> Instruction:
    if isinstance(ins, Apply):
        return Apply(ins.gate.inverse(), ins.targets)
    if isinstance(ins, Controlled):
        return Controlled(ins.controls, adjoint(ins.body))
    if isinstance(ins, Around):
        return Around(ins.outer, adjoint(ins.body))
    if isinstance(ins, AuxScope):
        return AuxScope(ins.aux, adjoint(ins.body))
    raise TypeError(f"not an instruction: {ins!r}")


def controlled(controls, instrs: Sequence[Instruction] | Instruction) -> Controlled:
    if not isinstance(instrs, (list, tuple)):
        instrs = (instrs,)
    return Controlled(_qubits(controls), tuple(instrs))


def around(outer: Sequence[Instruction], body: Sequence[Instruction]) -> Around:
    return Around(tuple(outer), tuple(body))


def apply(gate: GateKind, *targets) -> Apply:
    return Apply(gate, _qubits(targets))


def cx(c, t) -> Controlled:
    return controlled([c], apply(X(), t))


def mcx(controls, t) -> Controlled:
    return controlled(controls, apply(X(), t))


def merged_controls(ins: Controlled) -> Controlled:
    """Fold directly nested single-child Controlled nodes into one control set."""
    controls = list(ins.controls)
    body = ins.body
    while len(body) == 1 and isinstance(body[0], Controlled):
        controls.extend(body[0].controls)
        body = body[0].body
    if len(controls) == len(ins.controls):
        return ins
    return Controlled(tuple(controls), body)


def format_instrs(instrs: Sequence[Instruction], indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for ins in instrs:
        if isinstance(ins, Apply):
            lines.append(f"{pad}{ins.gate!r} {list(ins.targets)}")
        elif isinstance(ins, Controlled):
            lines.append(f"{pad}ctrl {list(ins.controls)}:")
            lines.append(format_instrs(ins.body, indent + 1))
        elif isinstance(ins, Around):
            lines.append(f"{pad}around:")
            lines.append(format_instrs(ins.outer, indent + 1))
            lines.append(f"{pad}do:")
            lines.append(format_instrs(ins.body, indent + 1))
        elif isinstance(ins, AuxScope):
            lines.append(f"{pad}aux {list(ins.aux)}:")
            lines.append(format_instrs(ins.body, indent + 1))
    return "\n".join(line for line in lines if line)


__all__ = [
    "Apply", "Around", "AuxScope", "Circuit", "Controlled", "GateKind", "IRError",
    "Instruction", "OverlapError", "QubitId", "QubitKind", "adjoint", "apply", "around",
    "aux", "controlled", "cx", "mcx", "q", "qubits_of", "validate", "walk",
    "X", "Y", "Z", "H", "RX", "RY", "RZ", "P",
]
