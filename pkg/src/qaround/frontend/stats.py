from __future__ import annotations

from dataclasses import dataclass, field

from ..ir import Circuit, Controlled
from ..passes.flatten import is_flat

COUNT_KEYS = ("cx", "h", "x", "y", "z", "rx", "ry", "rz", "p")


class NotFlattenedError(ValueError):
    pass


@dataclass
class GateStats:
    name: str
    counts: dict = field(default_factory=lambda: dict.fromkeys(COUNT_KEYS, 0))
    depth: int = 0
    qubits_main: int = 0
    qubits_aux_peak: int = 0
    passes: list = field(default_factory=list)

    @property
    def total_gates(self) -> int:
        return sum(self.counts.values())

    def as_json(self) -> dict:
        return {
            "name": self.name,
            "qubits_main": self.qubits_main,
            "qubits_aux_peak": self.qubits_aux_peak,
            "depth": self.depth,
            "counts": {k: self.counts[k] for k in COUNT_KEYS},
            "total_gates": self.total_gates,
            "passes": list(self.passes),
        }


def stats(circuit: Circuit) -> GateStats:
    """Gate counts and depth of a flattened circuit."""
    out = GateStats(circuit.name, qubits_main=circuit.num_main,
                    qubits_aux_peak=circuit.num_aux)
    level: dict = {}
    for i, ins in enumerate(circuit.instructions):
        if not is_flat(ins):
            raise NotFlattenedError(f"instruction {i} is not a built-in gate or CX")
        if isinstance(ins, Controlled):
            key = "cx"
            qs = (ins.controls[0], ins.body[0].targets[0])
        else:
            key = ins.gate.name.lower()
            qs = ins.targets
        out.counts[key] += 1
        d = max(level.get(qb, 0) for qb in qs) + 1
        for qb in qs:
            level[qb] = d
    out.depth = max(level.values(), default=0)
    return out
