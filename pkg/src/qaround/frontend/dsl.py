"""
Reader and writer for the ``.qc`` circuit language.

    qubits N                      register size (first statement)
    ancillas A                    optional: A clean aux qubits qN..qN+A-1
    x|y|z|h Q
    rx|ry|rz|p ANGLE Q            ANGLE: numbers, pi, + - * / and parentheses
    ccx|rccx Q, Q, Q              exact / relative-phase Toffoli
    ctrl Q[, Q...] { ... }
    around { outer } { body }
    aux NAME[K] { ... }           refer to NAME[i], or NAME when K == 1

Statements may be separated by newlines or ``;``; ``#`` starts a comment.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from itertools import count

from ..ir import (
    Apply, Around, AuxScope, Circuit, Controlled, GateKind, IRError, QubitId, QubitKind,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[{}\[\],;*/+\-()])
""", re.VERBOSE)

_SIMPLE = {"x": "X", "y": "Y", "z": "Z", "h": "H"}
_ROTATION = {"rx": "RX", "ry": "RY", "rz": "RZ", "p": "P"}
_MAIN_REF = re.compile(r"q(\d+)$")
_KEYWORDS = frozenset({*_SIMPLE, *_ROTATION, "ccx", "rccx", "ctrl", "around", "aux",
                       "qubits", "ancillas", "pi"})


def tokenize(src: str) -> list[Token]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, src: str, name: str):
        self.toks = tokenize(src)
        self.i = 0
        self.name = name
        self.num_main = None
        self.num_aux = 0
        self.ids = count()

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def integer(self) -> int:
        tok = self.next()
        if tok.kind != "num" or not tok.text.isdigit():
            raise self.error(f"expected a non-negative integer, found {tok.text!r}", tok)
        return int(tok.text)

    def skip_separators(self):
        while self.peek().text == ";":
            self.next()

    # grammar
    def program(self) -> Circuit:
        self.skip_separators()
        tok = self.peek()
        if tok.text != "qubits":
            raise self.error("program must start with 'qubits N'")
        self.next()
        self.num_main = self.integer()
        self.skip_separators()
        if self.peek().text == "ancillas":
            self.next()
            self.num_aux = self.integer()
        body = self.block_items({}, until="eof")
        try:
            return Circuit(self.num_main, body, name=self.name, num_aux=self.num_aux)
        except IRError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def block_items(self, scope: dict, until: str) -> list:
        items = []
        while True:
            self.skip_separators()
            tok = self.peek()
            if (until == "eof" and tok.kind == "eof") or (until == "}" and tok.text == "}"):
                return items
            if tok.kind == "eof":
                raise self.error("unexpected end of input, missing '}'")
            items.append(self.statement(scope))

    def braced(self, scope: dict) -> list:
        self.expect("{")
        items = self.block_items(scope, until="}")
        self.expect("}")
        return items

    def statement(self, scope: dict):
        tok = self.next()
        word = tok.text
        if tok.kind != "ident":
            raise self.error(f"expected a statement, found {word!r}", tok)
        if word in _SIMPLE:
            return Apply(GateKind(_SIMPLE[word]), (self.qref(scope),))
        if word in _ROTATION:
            angle = self.angle()
            return Apply(GateKind(_ROTATION[word], (angle,)), (self.qref(scope),))
        if word in ("ccx", "rccx"):
            qs = self.qref_list(scope)
            if len(qs) != 3:
                raise self.error(f"{word} takes three qubits", tok)
            return self._build(tok, Apply, GateKind("ccx", approx=word == "rccx"), qs)
        if word == "ctrl":
            controls = self.qref_list(scope)
            body = self.braced(scope)
            return self._build(tok, Controlled, controls, tuple(body))
        if word == "around":
            outer = self.braced(scope)
            body = self.braced(scope)
            return Around(tuple(outer), tuple(body))
        if word == "aux":
            name_tok = self.next()
            if (name_tok.kind != "ident" or _MAIN_REF.match(name_tok.text)
                    or name_tok.text in _KEYWORDS):
                raise self.error(f"invalid aux register name {name_tok.text!r}", name_tok)
            self.expect("[")
            k = self.integer()
            self.expect("]")
            regs = tuple(QubitId(next(self.ids), QubitKind.AUX) for _ in range(k))
            body = self.braced({**scope, name_tok.text: regs})
            return AuxScope(regs, tuple(body))
        if word in ("qubits", "ancillas"):
            raise self.error(f"'{word}' may only appear at the top of the program", tok)
        raise self.error(f"unknown statement {word!r}", tok)

    def _build(self, tok, cls, *args):
        try:
            return cls(*args)
        except IRError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def qref_list(self, scope: dict) -> tuple:
        qs = [self.qref(scope)]
        while self.peek().text == ",":
            self.next()
            qs.append(self.qref(scope))
        return tuple(qs)

    def qref(self, scope: dict) -> QubitId:
        tok = self.next()
        if tok.kind != "ident":
            raise self.error(f"expected a qubit, found {tok.text!r}", tok)
        m = _MAIN_REF.match(tok.text)
        if m and tok.text not in scope:
            idx = int(m.group(1))
            if idx >= self.num_main + self.num_aux:
                raise self.error(f"undeclared qubit {tok.text}", tok)
            return QubitId(idx)
        if tok.text not in scope:
            raise self.error(f"undeclared qubit {tok.text} (aux used outside its scope?)", tok)
        regs = scope[tok.text]
        if self.peek().text == "[":
            self.next()
            k = self.integer()
            self.expect("]")
        elif len(regs) == 1:
            k = 0
        else:
            raise self.error(f"aux register {tok.text} needs an index", tok)
        if k >= len(regs):
            raise self.error(f"{tok.text}[{k}] out of range (size {len(regs)})", tok)
        return regs[k]

    # angles
    def angle(self) -> float:
        return self.expr()

    def expr(self) -> float:
        v = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            v = v + self.term() if op == "+" else v - self.term()
        return v

    def term(self) -> float:
        v = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            rhs = self.unary()
            if op == "*":
                v *= rhs
            else:
                if rhs == 0:
                    raise self.error("division by zero in angle")
                v /= rhs
        return v

    def unary(self) -> float:
        tok = self.peek()
        if tok.text == "-":
            self.next()
            return -self.unary()
        if tok.text == "+":
            self.next()
            return self.unary()
        return self.atom()

    def atom(self) -> float:
        tok = self.next()
        if tok.kind == "num":
            return float(tok.text)
        if tok.text == "pi":
            return math.pi
        if tok.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise self.error(f"expected an angle, found {tok.text!r}", tok)


def parse(src: str, name: str = "circuit") -> Circuit:
    return _Parser(src, name).program()


# --------------------------------------------------------------------------
# writers

def _angle(a: float) -> str:
    return f"{a:.17g}"


def emit_text(circuit: Circuit) -> str:
    lines = [f"# {circuit.name}", f"qubits {circuit.num_main}"]
    if circuit.num_aux:
        lines.append(f"ancillas {circuit.num_aux}")
    scopes = count()
    names: dict = {}

    def ref(qb: QubitId) -> str:
        return names[qb] if qb.is_aux else f"q{qb.index}"

    def block(instrs, depth):
        pad = "    " * depth
        for ins in instrs:
            if isinstance(ins, Apply):
                g = ins.gate
                if g.builtin:
                    arg = f" {_angle(g.params[0])}" if g.params else ""
                    lines.append(f"{pad}{g.name.lower()}{arg} {ref(ins.targets[0])}")
                elif g.name == "ccx" and not g.dagger:
                    word = "rccx" if g.approx else "ccx"
                    lines.append(f"{pad}{word} " + ", ".join(ref(t) for t in ins.targets))
                else:
                    raise ValueError(f"gate {g!r} has no textual form")
            elif isinstance(ins, Controlled):
                lines.append(f"{pad}ctrl " + ", ".join(ref(c) for c in ins.controls) + " {")
                block(ins.body, depth + 1)
                lines.append(pad + "}")
            elif isinstance(ins, Around):
                lines.append(pad + "around {")
                block(ins.outer, depth + 1)
                lines.append(pad + "} {")
                block(ins.body, depth + 1)
                lines.append(pad + "}")
            elif isinstance(ins, AuxScope):
                reg = f"s{next(scopes)}"
                for k, qb in enumerate(ins.aux):
                    names[qb] = f"{reg}[{k}]"
                lines.append(f"{pad}aux {reg}[{len(ins.aux)}] {{")
                block(ins.body, depth + 1)
                lines.append(pad + "}")

    block(circuit.instructions, 0)
    return "\n".join(lines) + "\n"


def _json_instr(ins):
    ref = repr
    if isinstance(ins, Apply):
        d = {"op": "apply", "gate": ins.gate.name.lower(), "targets": [ref(t) for t in ins.targets]}
        if ins.gate.params:
            d["params"] = list(ins.gate.params)
        if ins.gate.approx:
            d["approx"] = True
        if ins.gate.dagger:
            d["dagger"] = True
        return d
    if isinstance(ins, Controlled):
        return {"op": "ctrl", "controls": [ref(c) for c in ins.controls],
                "body": [_json_instr(b) for b in ins.body]}
    if isinstance(ins, Around):
        return {"op": "around", "outer": [_json_instr(b) for b in ins.outer],
                "body": [_json_instr(b) for b in ins.body]}
    return {"op": "aux", "aux": [ref(a) for a in ins.aux],
            "body": [_json_instr(b) for b in ins.body]}


def emit_json(circuit: Circuit) -> str:
    doc = {
        "name": circuit.name,
        "qubits_main": circuit.num_main,
        "qubits_aux": circuit.num_aux,
        "instructions": [_json_instr(i) for i in circuit.instructions],
    }
    return json.dumps(doc, indent=2, sort_keys=True)
