from __future__ import annotations

import enum

from ..ir import Circuit
from .flatten import flatten
from .rewrite import (
    PassReport, distribute_controls, hoist_controls_from_around, substitute_approximate,
)


class OptLevel(enum.Enum):
    NONE = "none"
    CTRL = "ctrl"
    APPROX = "approx"
    ALL = "all"


def run_pipeline(circuit: Circuit, level: OptLevel | str = OptLevel.ALL
                 ) -> tuple[Circuit, list[PassReport]]:
    """Run the passes for ``level`` in fixed order, ending with flatten.

    Hoisting must precede distribution, otherwise distribution pushes the
    controls into both halves of every Around and the saving is lost.
    """
    level = OptLevel(level)
    passes = []
    if level in (OptLevel.CTRL, OptLevel.ALL):
        passes += [hoist_controls_from_around, distribute_controls]
    if level in (OptLevel.APPROX, OptLevel.ALL):
        passes.append(substitute_approximate)
    reports = []
    for p in passes:
        circuit, report = p(circuit)
        reports.append(report)
    allow = level in (OptLevel.APPROX, OptLevel.ALL)
    circuit, report = flatten(circuit, allow_approx=allow)
    reports.append(report)
    return circuit, reports
