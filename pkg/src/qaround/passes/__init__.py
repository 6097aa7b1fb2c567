from .flatten import flatten, is_flat
from .library import (
    DecompositionUnavailableError, GateLibrary, GateLibraryEntry, LibraryRegistrationError,
    get_library, register_library, v_chain,
)
from .pipeline import OptLevel, run_pipeline
from .rewrite import (
    PassReport, distribute_controls, hoist_controls_from_around, substitute_approximate,
)

__all__ = [
    "DecompositionUnavailableError", "GateLibrary", "GateLibraryEntry",
    "LibraryRegistrationError", "OptLevel", "PassReport", "distribute_controls", "flatten",
    "get_library", "hoist_controls_from_around", "is_flat", "register_library",
    "run_pipeline", "substitute_approximate", "v_chain",
]
