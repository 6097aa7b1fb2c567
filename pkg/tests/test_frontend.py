import io
import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import random_instrs
from qaround.frontend import (
    GateStats, NotFlattenedError, ParseError, build_rxx, build_v_chain, emit_json, emit_text,
    parse, stats,
)
from qaround.frontend.cli import main
from qaround.ir import (
    RZ, Apply, AuxScope, Circuit, GateKind, H, X, apply, around, cx, mcx, q,
)
from qaround.numerics import equivalent, unitary
from qaround.passes import flatten, run_pipeline

AUX_H = "qubits 1\naux a[1] {\n  h a\n}\n"


def _cli(argv, capsys):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue(), capsys.readouterr().err


# ---------------------------------------------------------------- parser

def test_parse_cnot():
    c = parse("qubits 2; ctrl q0 { x q1 }")
    assert c.num_main == 2
    assert c.instructions == (cx(q(0), q(1)),)


def test_parse_rxx_program():
    c = parse("qubits 2\naround { h q0; h q1; ctrl q0 { x q1 } } { rz pi q1 }")
    assert c.instructions == build_rxx().instructions


def test_parse_angle_expressions():
    c = parse("qubits 1; rz -pi/4 q0; p 2*(pi - 1) q0; rx 0.5e1 q0")
    assert [i.gate.params[0] for i in c.instructions] == pytest.approx(
        [-np.pi / 4, 2 * (np.pi - 1), 5.0])


def test_parse_aux_scope_and_toffolis():
    c = parse("qubits 3\naux a[2] {\n around { ccx q0, q1, a[0] } { rccx a[0], q2, a[1] }\n}")
    (scope,) = c.instructions
    assert isinstance(scope, AuxScope) and len(scope.aux) == 2
    (ar,) = scope.body
    assert ar.outer == (Apply(GateKind("ccx"), (q(0), q(1), scope.aux[0])),)
    assert ar.body[0].gate.approx


def test_parse_comments_and_ancillas():
    c = parse("# header\nqubits 1  # main\nancillas 1\nx q1  # declared ancilla\n")
    assert (c.num_main, c.num_aux) == (1, 1)


@pytest.mark.parametrize("src,where,fragment", [
    ("qubits 2\nx q5", (2, 3), "undeclared qubit q5"),
    ("qubits 1\naux a[1] { z a }\nx a", (3, 3), "outside its scope"),
    ("x q0", (1, 1), "must start with 'qubits N'"),
    ("qubits 1\nfoo q0", (2, 1), "unknown statement"),
    ("qubits 1\nrz q0", (2, 4), "expected an angle"),
    ("qubits 2\nctrl q0 { x q1", (2, 15), "missing '}'"),
    ("qubits 2\nctrl q0 { x q0 }", (2, 1), ""),
    ("qubits 1\n$", (2, 1), "unexpected character"),
    ("qubits 1\naux ctrl[1] { }", (2, 5), "invalid aux register name"),
])
def test_parse_errors_have_locations(src, where, fragment):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert (info.value.line, info.value.col) == where
    assert fragment in info.value.message


def test_emit_text_round_trip(rng):
    qubits = [q(i) for i in range(4)]
    for _ in range(40):
        seq = random_instrs(rng, qubits, 6, library=True)
        c = Circuit(4, seq)
        back = parse(emit_text(c))
        assert equivalent(unitary(back), unitary(c))
        assert back.instructions == c.instructions


def test_emit_text_round_trip_keeps_stats():
    c = build_v_chain(4)
    back = parse(emit_text(c))
    a, _ = run_pipeline(c, "all")
    b, _ = run_pipeline(back, "all")
    assert stats(a).counts == stats(b).counts


def test_emit_json_shape():
    doc = json.loads(emit_json(Circuit(2, [around([apply(H(), q(0))], [cx(q(0), q(1))])])))
    assert doc["qubits_main"] == 2
    assert doc["instructions"][0]["op"] == "around"
    assert doc["instructions"][0]["body"][0] == {
        "op": "ctrl", "controls": ["q0"],
        "body": [{"op": "apply", "gate": "x", "targets": ["q1"]}]}


# ---------------------------------------------------------------- builders and stats

def test_v_chain_small_cases():
    assert build_v_chain(2).instructions == (mcx([q(0), q(1)], q(2)),)
    assert build_v_chain(1).instructions == (cx(q(0), q(1)),)
    with pytest.raises(ValueError):
        build_v_chain(0)


def test_v_chain_six_has_nine_toffoli_applications():
    out, _ = run_pipeline(build_v_chain(6), "none")
    assert stats(out).counts["cx"] == 9 * 6
    assert out.num_aux == 4


def test_stats_of_exact_toffoli():
    out, _ = flatten(Circuit(3, [mcx([q(0), q(1)], q(2))]))
    st = stats(out)
    assert st.counts["cx"] == 6
    assert st.total_gates == sum(st.counts.values()) == 15


def test_stats_of_empty_circuit():
    st = stats(Circuit(2, []))
    assert st.total_gates == 0 and st.depth == 0
    assert set(st.counts.values()) == {0}


def test_stats_depth():
    c = Circuit(3, [apply(H(), q(0)), apply(X(), q(1)), cx(q(0), q(1)), apply(RZ(1.0), q(2))])
    assert stats(c).depth == 2


def test_stats_requires_flat_circuit():
    with pytest.raises(NotFlattenedError):
        stats(Circuit(3, [mcx([q(0), q(1)], q(2))]))


def test_stats_json_schema():
    doc = GateStats("x").as_json()
    assert set(doc) == {"name", "qubits_main", "qubits_aux_peak", "depth", "counts",
                        "total_gates", "passes"}
    assert list(doc["counts"]) == ["cx", "h", "x", "y", "z", "rx", "ry", "rz", "p"]


# ---------------------------------------------------------------- CLI

@pytest.mark.parametrize("level,want", [("none", 54), ("all", 30)])
def test_cli_vchain_headline(level, want, capsys):
    code, out, _ = _cli(["vchain", "--controls", "6", "--opt", level, "--stats"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["counts"]["cx"] == want
    assert doc["qubits_main"] == 7 and doc["qubits_aux_peak"] == 4


def test_cli_reports_pass_counts(capsys):
    _, out, _ = _cli(["vchain", "--controls", "6", "--stats"], capsys)
    passes = {p["pass"]: p for p in json.loads(out)["passes"]}
    assert passes["substitute_approximate"]["examined"] == 9
    assert passes["substitute_approximate"]["rewritten"] == 8


def test_cli_compile_verify(tmp_path, capsys):
    f = tmp_path / "rxx.qc"
    f.write_text("qubits 2\naround { h q0; h q1; ctrl q0 { x q1 } } { rz pi q1 }\n")
    code, out, err = _cli(["compile", str(f), "--verify", "--emit", "text"], capsys)
    assert code == 0
    assert "verified" in err
    assert out.startswith("# rxx\nqubits 2\n")


def test_cli_emit_json(tmp_path, capsys):
    f = tmp_path / "c.qc"
    f.write_text("qubits 3\nctrl q0, q1 { x q2 }\n")
    code, out, _ = _cli(["compile", str(f), "--emit", "json", "--opt", "none"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["qubits_main"] == 3
    assert all(i["op"] in ("apply", "ctrl") for i in doc["instructions"])


def test_cli_verify_refuses_large_circuits(capsys):
    code, _, err = _cli(["vchain", "--controls", "7", "--verify"], capsys)
    assert code == 1
    assert "exceeds" in err


def test_cli_check_rejects_h_on_aux(tmp_path, capsys):
    f = tmp_path / "bad.qc"
    f.write_text(AUX_H)
    code, _, err = _cli(["check", str(f)], capsys)
    assert code == 1
    assert "non-diagonal gate" in err and "aux" in err


def test_cli_check_accepts_v_chain(tmp_path, capsys):
    f = tmp_path / "ok.qc"
    f.write_text(emit_text(build_v_chain(4)))
    code, out, _ = _cli(["check", str(f)], capsys)
    assert code == 0 and out.startswith("accepted")


def test_cli_compile_unsafe_aux_is_a_diagnostic(tmp_path, capsys):
    f = tmp_path / "bad.qc"
    f.write_text(AUX_H)
    code, _, err = _cli(["compile", str(f)], capsys)
    assert code == 1 and err.startswith("error:")


def test_cli_parse_error_location(tmp_path, capsys):
    f = tmp_path / "typo.qc"
    f.write_text("qubits 2\nx q9\n")
    code, _, err = _cli(["compile", str(f)], capsys)
    assert code == 1
    assert f"{f}:2:3:" in err


def test_cli_missing_file(capsys):
    code, _, err = _cli(["check", "/nonexistent/none.qc"], capsys)
    assert code == 1 and "cannot read" in err


def test_cli_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qaround", "vchain", "--controls", "3",
                           "--stats"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["counts"]["cx"] == 6 * 3 - 6
