"""
Command-line driver.

    qaround compile FILE [--opt none|ctrl|approx|all] [--emit text|json] [--stats] [--verify]
    qaround vchain --controls N [--opt ...] [--emit ...] [--stats] [--verify]
    qaround check FILE

Exit codes: 0 ok, 1 diagnostics, 2 verification failure, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..ancilla import AncillaError, check_circuit, resolve_aux
from ..ir import Circuit, IRError
from ..numerics import MAX_UNITARY_QUBITS, Mode, aux_restored, equivalent, main_map
from ..passes import DecompositionUnavailableError, OptLevel, run_pipeline
from .builders import build_v_chain
from .dsl import ParseError, emit_json, emit_text, parse
from .stats import stats

EXIT_OK, EXIT_DIAG, EXIT_VERIFY, EXIT_INTERNAL = 0, 1, 2, 3


class Diagnostic(Exception):
    pass


def verify(before: Circuit, after: Circuit) -> tuple[bool, str]:
    """Compare the pass output with its input on the clean-aux subspace."""
    pre = resolve_aux(before).circuit
    for c in (pre, after):
        if c.num_qubits > MAX_UNITARY_QUBITS:
            raise Diagnostic(
                f"--verify refused: {c.num_qubits} qubits (main + aux) exceeds the "
                f"dense-oracle limit of {MAX_UNITARY_QUBITS}")
    if not aux_restored(after, after.num_main, after.num_aux):
        return False, "aux qubits are not returned to |0>"
    if not aux_restored(pre, pre.num_main, pre.num_aux):
        return False, "input circuit does not restore its aux qubits"
    u = main_map(pre, pre.num_main, pre.num_aux)
    v = main_map(after, after.num_main, after.num_aux)
    if not equivalent(u, v, Mode.GLOBAL_PHASE):
        return False, "compiled circuit differs from its input"
    return True, "verified: compiled circuit matches its input"


def _compile(circuit: Circuit, args, out) -> int:
    result, reports = run_pipeline(circuit, OptLevel(args.opt))
    if args.emit == "text":
        out.write(emit_text(result))
    elif args.emit == "json":
        out.write(emit_json(result) + "\n")
    if args.stats or not args.emit:
        st = stats(result)
        st.passes = [r.as_json() for r in reports]
        out.write(json.dumps(st.as_json(), sort_keys=True) + "\n")
    if args.verify:
        ok, msg = verify(circuit, result)
        print(msg, file=sys.stderr)
        if not ok:
            return EXIT_VERIFY
    return EXIT_OK


def _load(path: str) -> Circuit:
    p = Path(path)
    try:
        src = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise Diagnostic(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse(src, name=p.stem)
    except ParseError as exc:
        raise Diagnostic(f"{path}:{exc.line}:{exc.col}: {exc.message}") from None


def _check(circuit: Circuit, out) -> int:
    verdict = check_circuit(circuit)
    if verdict.accepted:
        out.write("accepted: every aux scope is uncomputed\n")
        return EXIT_OK
    for path, reason in verdict.violations:
        print(f"aux safety violation at {path}: {reason}", file=sys.stderr)
    return EXIT_DIAG


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qaround", description=__doc__.splitlines()[1])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--opt", choices=[lv.value for lv in OptLevel], default="all")
        p.add_argument("--emit", choices=["text", "json"])
        p.add_argument("--stats", action="store_true", help="print gate statistics as JSON")
        p.add_argument("--verify", action="store_true",
                       help="check the result against the input with the dense oracle")

    p = sub.add_parser("compile", help="compile a .qc file")
    p.add_argument("file")
    common(p)
    p = sub.add_parser("vchain", help="compile the V-chain multi-controlled X")
    p.add_argument("--controls", type=int, required=True)
    common(p)
    p = sub.add_parser("check", help="report the aux safety verdict of a .qc file")
    p.add_argument("file")
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _check(_load(args.file), out)
        if args.command == "vchain":
            if args.controls < 1:
                raise Diagnostic("--controls must be at least 1")
            circuit = build_v_chain(args.controls)
        else:
            circuit = _load(args.file)
        return _compile(circuit, args, out)
    except (Diagnostic, AncillaError, DecompositionUnavailableError, IRError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAG
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
