"""
Structural rewrite passes over the instruction tree.

    distribute_controls        C(U_k ... U_0)  ->  C(U_k) ... C(U_0)
    hoist_controls_from_around C(A^dag B A)    ->  A^dag C(B) A
    substitute_approximate     swap permutation conjugators for their
                               cheaper relative-phase expansions where
                               the body provably cancels the defect
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..classify import basis_violations, classify_instrs, format_path
from ..ir import (
    Apply, Around, AuxScope, Circuit, Controlled, GateKind, Instruction, QubitId, qubits_of,
)


@dataclass
class PassReport:
    pass_name: str
    sites_examined: int = 0
    sites_rewritten: int = 0
    notes: list[str] = field(default_factory=list)

    def as_json(self) -> dict:
        return {"pass": self.pass_name, "examined": self.sites_examined,
                "rewritten": self.sites_rewritten}


# --------------------------------------------------------------------------
# control distribution

def distribute_controls(circuit: Circuit) -> tuple[Circuit, PassReport]:
    report = PassReport("distribute_controls")
    out = _distribute(circuit.instructions, (), report)
    return circuit.replace(out), report


def _distribute(instrs, path, report) -> list[Instruction]:
    out = []
    for i, ins in enumerate(instrs):
        here = path + (i,)
        if isinstance(ins, Controlled):
            report.sites_examined += 1
            pieces = _distribute_ctrl(ins.controls, ins.body, here, report)
            if pieces != [ins]:
                report.sites_rewritten += 1
                report.notes.append(f"{format_path(here)}: {len(pieces)} controlled piece(s)")
            out += pieces
        elif isinstance(ins, Around):
            out.append(Around(_distribute(ins.outer, here + ("outer",), report),
                              _distribute(ins.body, here + ("body",), report)))
        elif isinstance(ins, AuxScope):
            out.append(AuxScope(ins.aux, _distribute(ins.body, here + ("body",), report)))
        else:
            out.append(ins)
    return out


def _distribute_ctrl(controls, body, path, report) -> list[Instruction]:
    out = []
    for j, ins in enumerate(body):
        here = path + ("body", j)
        if isinstance(ins, Apply):
            out.append(Controlled(controls, (ins,)))
        elif isinstance(ins, Controlled):
            out += _distribute_ctrl(controls + ins.controls, ins.body, here, report)
        elif isinstance(ins, Around):
            # left whole: hoisting owns this shape
            inner = Around(_distribute(ins.outer, here + ("outer",), report),
                           _distribute(ins.body, here + ("body",), report))
            out.append(Controlled(controls, (inner,)))
        elif isinstance(ins, AuxScope):
            inner = _distribute_ctrl(controls, ins.body, here, report)
            out.append(AuxScope(ins.aux, inner))
    return out


# --------------------------------------------------------------------------
# control hoisting

def hoist_controls_from_around(circuit: Circuit) -> tuple[Circuit, PassReport]:
    report = PassReport("hoist_controls_from_around")
    out = _hoist(circuit.instructions, (), report)
    return circuit.replace(out), report


def _hoist(instrs, path, report) -> list[Instruction]:
    out = []
    for i, ins in enumerate(instrs):
        here = path + (i,)
        if isinstance(ins, Controlled):
            report.sites_examined += 1
            out += _hoist_ctrl(ins.controls, _hoist(ins.body, here + ("body",), report),
                               here, report)
        elif isinstance(ins, Around):
            out.append(Around(_hoist(ins.outer, here + ("outer",), report),
                              _hoist(ins.body, here + ("body",), report)))
        elif isinstance(ins, AuxScope):
            out.append(AuxScope(ins.aux, _hoist(ins.body, here + ("body",), report)))
        else:
            out.append(ins)
    return out


def _hoist_ctrl(controls, body, path, report) -> list[Instruction]:
    """Controls over an already-hoisted body; each Around in it sheds the controls."""
    if not any(isinstance(b, Around) for b in body):
        return [Controlled(controls, tuple(body))]
    out: list[Instruction] = []
    run: list[Instruction] = []
    for ins in body:
        if isinstance(ins, Around):
            if run:
                out.append(Controlled(controls, tuple(run)))
                run = []
            report.sites_rewritten += 1
            report.notes.append(f"{format_path(path)}: control moved inside Around")
            inner = _hoist_ctrl(controls, ins.body, path, report)
            out.append(Around(ins.outer, tuple(inner)))
        else:
            run.append(ins)
    if run:
        out.append(Controlled(controls, tuple(run)))
    return out


# --------------------------------------------------------------------------
# approximate substitution

def toffoli_site(ins: Instruction) -> tuple[QubitId, QubitId, QubitId] | None:
    """(c0, c1, target) when ``ins`` is an exact Toffoli in either spelling."""
    if isinstance(ins, Apply) and ins.gate.name == "ccx" and not ins.gate.approx:
        return tuple(ins.targets)
    if isinstance(ins, Controlled):
        controls, body = list(ins.controls), ins.body
        while len(body) == 1 and isinstance(body[0], Controlled):
            controls += body[0].controls
            body = body[0].body
        if (len(controls) == 2 and len(body) == 1 and isinstance(body[0], Apply)
                and body[0].gate.name == "X"):
            return (controls[0], controls[1], body[0].targets[0])
    return None


def approx_toffoli(qubits) -> Apply:
    return Apply(GateKind("ccx", approx=True), tuple(qubits))


def substitute_approximate(circuit: Circuit) -> tuple[Circuit, PassReport]:
    report = PassReport("substitute_approximate")
    out = _substitute(circuit.instructions, (), 1, report)
    return circuit.replace(out), report


def _substitute(instrs, path, mult, report) -> list[Instruction]:
    out = []
    for i, ins in enumerate(instrs):
        here = path + (i,)
        if toffoli_site(ins) is not None:
            # not inside any conjugation: nothing cancels the defect
            report.sites_examined += mult
            out.append(ins)
        elif isinstance(ins, Around):
            out.append(_substitute_around(ins, here, mult, report))
        elif isinstance(ins, Controlled):
            out.append(Controlled(ins.controls,
                                  tuple(_substitute(ins.body, here + ("body",), mult, report))))
        elif isinstance(ins, AuxScope):
            out.append(AuxScope(ins.aux,
                                tuple(_substitute(ins.body, here + ("body",), mult, report))))
        else:
            out.append(ins)
    return out


def _substitute_around(ins: Around, path, mult, report) -> Around:
    sites = [k for k, o in enumerate(ins.outer) if toffoli_site(o) is not None]
    body = tuple(_substitute(ins.body, path + ("body",), mult, report))
    outer = list(ins.outer)
    if sites:
        # the compute and the implicit uncompute half each hold one copy
        report.sites_examined += 2 * mult * len(sites)
        reason = _substitution_blocker(ins)
        if reason is None:
            for k in sites:
                outer[k] = approx_toffoli(toffoli_site(outer[k]))
            report.sites_rewritten += 2 * mult * len(sites)
            report.notes.append(
                f"{format_path(path)}: {len(sites)} Toffoli conjugator(s) -> relative-phase")
        else:
            report.notes.append(f"{format_path(path)}: kept exact ({reason})")
    for k, o in enumerate(outer):
        if k not in sites:
            outer[k] = _substitute([o], path + ("outer", k), 2 * mult, report)[0]
    return Around(tuple(outer), body)


def _substitution_blocker(ins: Around) -> str | None:
    for k, o in enumerate(ins.outer):
        if not classify_instrs([o]).is_permutation:
            return f"conjugator item {k} is not a permutation"
    found = basis_violations(ins.body, qubits_of(ins.outer), role="permuted")
    if found:
        return found[0][1]
    return None
