"""
Scoped clean-ancilla allocation and the static uncomputation checker.

An aux qubit may be touched only by diagonal gates, used as a control, or
permuted by the outer half of an Around whose body leaves every qubit of
that outer half in its computational basis. Anything else is rejected,
even when it happens to restore the ancilla (the check is pessimistic).
"""
from __future__ import annotations

import functools
import inspect
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .classify import basis_violations
from .ir import (
    Apply, Around, AuxScope, Circuit, Controlled, Instruction, QubitId, QubitKind, walk,
)


class AncillaError(RuntimeError):
    pass


class PoolExhaustedError(AncillaError):
    pass


class UnsafeReleaseError(AncillaError):
    pass


class DoubleFreeError(AncillaError):
    pass


@dataclass(frozen=True)
class SafetyVerdict:
    accepted: bool
    violations: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.accepted != (not self.violations):
            raise ValueError("accepted iff there are no violations")

    def describe(self) -> str:
        if self.accepted:
            return "accepted"
        return "\n".join(f"rejected at {p}: {reason}" for p, reason in self.violations)


ACCEPTED = SafetyVerdict(True)


def check_aux_safety(scope: AuxScope, path: tuple = ()) -> SafetyVerdict:
    """Verdict for a scope's own aux qubits and every scope nested in it."""
    found = basis_violations(scope.body, scope.aux, path + ("body",), role="aux")
    found += _nested(scope.body, path + ("body",))
    return SafetyVerdict(not found, tuple(found))


def _nested(instrs, path) -> list:
    found = []
    for i, ins in enumerate(instrs):
        here = path + (i,)
        if isinstance(ins, AuxScope):
            found += check_aux_safety(ins, here).violations
        elif isinstance(ins, Around):
            found += _nested(ins.outer, here + ("outer",))
            found += _nested(ins.body, here + ("body",))
        elif isinstance(ins, Controlled):
            found += _nested(ins.body, here + ("body",))
    return found


def check_circuit(circuit: Circuit) -> SafetyVerdict:
    """Combined verdict over every aux scope in a circuit."""
    found = _nested(circuit.instructions, ())
    return SafetyVerdict(not found, tuple(found))


# --------------------------------------------------------------------------
# pool

class AuxPool:
    """Free-list over a contiguous aux region starting at qubit ``base``."""

    def __init__(self, capacity: int = 0, base: int = 0):
        self.base = base
        self.capacity = capacity
        self.free: list[int] = list(range(capacity))
        self.in_use: set[int] = set()
        self.peak = 0

    def grow(self, extra: int) -> None:
        self.free.extend(range(self.capacity, self.capacity + extra))
        self.free.sort()
        self.capacity += extra

    def allocate(self, n: int) -> list[QubitId]:
        if n > len(self.free):
            raise PoolExhaustedError(f"requested {n} aux qubits, {len(self.free)} free")
        taken, self.free = self.free[:n], self.free[n:]
        self.in_use.update(taken)
        self.peak = max(self.peak, len(self.in_use))
        return [QubitId(self.base + s) for s in taken]

    def allocate_growing(self, n: int) -> list[QubitId]:
        short = n - len(self.free)
        if short > 0:
            self.grow(short)
        return self.allocate(n)

    def release(self, qs: Sequence[QubitId], verdict: SafetyVerdict) -> None:
        slots = [qb.index - self.base for qb in qs]
        missing = [s for s in slots if s not in self.in_use]
        if missing:
            raise DoubleFreeError(f"aux slot(s) {missing} are not in use")
        if not verdict.accepted:
            raise UnsafeReleaseError(verdict.describe())
        self.in_use.difference_update(slots)
        self.free = sorted(self.free + slots)


# --------------------------------------------------------------------------
# scoped requests

def fresh_ids(start: int = 0) -> Iterator[int]:
    return itertools.count(start)


def next_aux_id(instrs: Sequence[Instruction]) -> int:
    used = [qb.index for ins in walk(instrs) if isinstance(ins, AuxScope) for qb in ins.aux]
    return max(used, default=-1) + 1


@dataclass(frozen=True)
class AuxRequest:
    """Named aux register whose size is computed from the caller's arguments."""

    name: str
    sizing: Callable[..., int]

    def count(self, arguments: dict) -> int:
        params = inspect.signature(self.sizing).parameters
        n = self.sizing(**{k: arguments[k] for k in params})
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"aux request {self.name!r} sized {n!r}")
        return n


def using_aux(**sizing: Callable[..., int]):
    """Decorate an instruction builder so it receives freshly scoped aux registers.

    Each keyword names a register and gives a function of the builder's
    arguments returning how many qubits to allocate::

        @using_aux(a=lambda c: int(len(c) > 2))
        def v_chain(c, t, *, a, ids): ...

    The wrapped builder takes an ``ids`` iterator supplying unique aux ids
    and returns its instructions wrapped in an AuxScope when anything was
    allocated.
    """
    requests = [AuxRequest(name, rule) for name, rule in sizing.items()]

    def deco(fn):
        sig = inspect.signature(fn)

        @functools.wraps(fn)
        def wrapper(*args, ids: Iterator[int], **kw):
            bound = sig.bind_partial(*args, **kw).arguments
            regs = {}
            for req in requests:
                regs[req.name] = tuple(QubitId(next(ids), QubitKind.AUX)
                                       for _ in range(req.count(bound)))
            body = tuple(fn(*args, ids=ids, **regs, **kw))
            allocated = tuple(qb for r in regs.values() for qb in r)
            return [AuxScope(allocated, body)] if allocated else list(body)

        wrapper.aux_requests = requests
        return wrapper

    return deco


# --------------------------------------------------------------------------
# resolution

@dataclass
class Resolution:
    circuit: Circuit
    peak: int
    verdicts: list = field(default_factory=list)


def resolve_aux(circuit: Circuit, check: bool = True) -> Resolution:
    """Replace every AuxScope by its body on concrete qubits above the main register.

    Scopes are allocated from a growing pool in program order and released
    on exit, so sibling scopes share qubits. With ``check`` each release
    demands an accepted verdict.
    """
    pool = AuxPool(0, base=circuit.num_qubits)
    verdicts = []

    def go(instrs, names: dict) -> list[Instruction]:
        out = []
        for ins in instrs:
            if isinstance(ins, Apply):
                out.append(Apply(ins.gate, tuple(names.get(qb, qb) for qb in ins.targets)))
            elif isinstance(ins, Controlled):
                out.append(Controlled(tuple(names.get(qb, qb) for qb in ins.controls),
                                      tuple(go(ins.body, names))))
            elif isinstance(ins, Around):
                out.append(Around(tuple(go(ins.outer, names)), tuple(go(ins.body, names))))
            elif isinstance(ins, AuxScope):
                verdict = check_aux_safety(ins) if check else ACCEPTED
                verdicts.append(verdict)
                qs = pool.allocate_growing(len(ins.aux))
                out += go(ins.body, {**names, **dict(zip(ins.aux, qs))})
                pool.release(qs, verdict)
        return out

    body = go(circuit.instructions, {})
    resolved = circuit.replace(body, num_aux=circuit.num_aux + pool.capacity)
    return Resolution(resolved, pool.peak, verdicts)
