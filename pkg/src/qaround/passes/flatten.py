"""
Lowering to built-in single-qubit gates plus CX.

Multi-controlled X uses the Toffoli library entry (two controls) or the
V-chain (three or more, with clean aux). Any other multi-controlled gate
computes the AND of its controls into one aux qubit and applies the
singly-controlled gate from there. Aux scopes are resolved to concrete
qubits above the main register as they are met.
"""
from __future__ import annotations

from ..ancilla import AuxPool, check_aux_safety, fresh_ids, next_aux_id, using_aux
from ..ir import (
    Apply, Around, AuxScope, Circuit, Controlled, GateKind, Instruction, X, adjoint, apply,
    around, controlled, mcx, merged_controls,
)
from .library import DecompositionUnavailableError, controlled_builtin, get_library, v_chain
from .rewrite import PassReport, _substitute


@using_aux(a=lambda c: 1)
def controlled_via_aux(c, gate: GateKind, t, *, a=(), ids) -> list[Instruction]:
    return [around([mcx(c, a[0])], [controlled([a[0]], apply(gate, t))])]


def is_flat(ins: Instruction) -> bool:
    if isinstance(ins, Apply):
        return ins.gate.builtin
    return (isinstance(ins, Controlled) and len(ins.controls) == 1 and len(ins.body) == 1
            and isinstance(ins.body[0], Apply) and ins.body[0].gate.name == "X")


class _Flattener:
    def __init__(self, circuit: Circuit, allow_approx: bool):
        self.allow_approx = allow_approx
        self.pool = AuxPool(0, base=circuit.num_qubits)
        self.ids = fresh_ids(next_aux_id(circuit.instructions))
        self.report = PassReport("flatten")
        self.out: list[Instruction] = []

    def run(self, instrs, names: dict) -> None:
        for ins in instrs:
            self.report.sites_examined += 1
            if not is_flat(ins):
                self.report.sites_rewritten += 1
            self.one(ins, names)

    def fragment(self, instrs, names: dict) -> None:
        if self.allow_approx:
            instrs = _substitute(instrs, (), 1, PassReport("substitute_approximate"))
        self._inline(instrs, names)

    def _inline(self, instrs, names: dict) -> None:
        for ins in instrs:
            self.one(ins, names)

    def one(self, ins: Instruction, names: dict) -> None:
        ren = lambda qs: tuple(names.get(qb, qb) for qb in qs)
        if isinstance(ins, Apply):
            if ins.gate.builtin:
                self.out.append(Apply(ins.gate, ren(ins.targets)))
                return
            entry = get_library().get(ins.gate.name)
            if entry is None:
                raise DecompositionUnavailableError(f"no expansion registered for {ins.gate.name}")
            self._inline(entry.expand(ins.targets, ins.gate.approx, ins.gate.dagger), names)
        elif isinstance(ins, Around):
            self._inline(ins.outer, names)
            self._inline(ins.body, names)
            self._inline(adjoint(ins.outer), names)
        elif isinstance(ins, AuxScope):
            verdict = check_aux_safety(ins)
            qs = self.pool.allocate_growing(len(ins.aux))
            self._inline(ins.body, {**names, **dict(zip(ins.aux, qs))})
            self.pool.release(qs, verdict)
        elif isinstance(ins, Controlled):
            self._controlled(merged_controls(ins), names)
        else:
            raise TypeError(f"not an instruction: {ins!r}")

    def _controlled(self, ins: Controlled, names: dict) -> None:
        c = ins.controls
        if len(ins.body) != 1:
            for b in ins.body:
                self.one(Controlled(c, (b,)), names)
            return
        (b,) = ins.body
        if isinstance(b, Around):
            # no hoisting here: every half picks up the controls
            self.one(Controlled(c, tuple(b.outer) + tuple(b.body) + adjoint(b.outer)), names)
        elif isinstance(b, AuxScope):
            self.one(AuxScope(b.aux, (Controlled(c, b.body),)), names)
        elif isinstance(b, Apply) and not b.gate.builtin:
            if b.gate.name == "ccx" and not b.gate.approx:
                self.one(mcx(c + b.targets[:2], b.targets[2]), names)
            else:
                entry = get_library().get(b.gate.name)
                if entry is None:
                    raise DecompositionUnavailableError(
                        f"no expansion registered for {b.gate.name}")
                self.one(Controlled(c, entry.expand(b.targets, b.gate.approx, b.gate.dagger)),
                         names)
        elif isinstance(b, Apply):
            t = b.targets[0]
            if b.gate.name == "X":
                if len(c) == 1:
                    self.out.append(Controlled((names.get(c[0], c[0]),),
                                               (Apply(X(), (names.get(t, t),)),)))
                elif len(c) == 2:
                    self.one(Apply(GateKind("ccx"), (*c, t)), names)
                else:
                    self.fragment(v_chain(list(c), t, ids=self.ids), names)
            elif len(c) == 1:
                self._inline(controlled_builtin(b.gate, c[0], t), names)
            else:
                self.fragment(controlled_via_aux(list(c), b.gate, t, ids=self.ids), names)
        else:
            raise TypeError(f"not an instruction: {b!r}")


def flatten(circuit: Circuit, allow_approx: bool = False) -> tuple[Circuit, PassReport]:
    """Lower to {1-qubit built-ins, CX} and resolve every aux scope.

    ``allow_approx`` lets decompositions introduced here (V-chains,
    aux-assisted controls) use relative-phase Toffolis where safe;
    Toffolis already chosen by earlier passes are honoured either way.
    """
    f = _Flattener(circuit, allow_approx)
    f.run(circuit.instructions, {})
    out = circuit.replace(f.out, num_aux=circuit.num_aux + f.pool.capacity)
    return out, f.report
