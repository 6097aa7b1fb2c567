"""Circuit compiler kernel built around conjugation (``around``) blocks."""
from .ir import Apply, Around, AuxScope, Circuit, Controlled, GateKind, QubitId
from .numerics import Mode, apply, aux_restored, equivalent, unitary
from .passes import OptLevel, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "Apply", "Around", "AuxScope", "Circuit", "Controlled", "GateKind", "Mode", "OptLevel",
    "QubitId", "apply", "aux_restored", "equivalent", "run_pipeline", "unitary",
]
