from .builders import build_cnot, build_rxx, build_rxx_explicit, build_v_chain
from .dsl import ParseError, emit_json, emit_text, parse
from .stats import GateStats, NotFlattenedError, stats

__all__ = [
    "GateStats", "NotFlattenedError", "ParseError", "build_cnot", "build_rxx",
    "build_rxx_explicit", "build_v_chain", "emit_json", "emit_text", "parse", "stats",
]
