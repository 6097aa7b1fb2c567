"""
Dense simulation and the equivalence oracle.

Two independent evaluators are provided on purpose:

    - unitary(): tensor-contraction over a batch of basis columns, with
      library gates taken from their registered matrices and controls
      realised by slicing the control axes at |1>.
    - apply(): bit-mask statevector evolution, with library gates expanded
      into their instruction sequences.

Tests cross-check one against the other.
"""
from __future__ import annotations

import enum
from functools import lru_cache
from typing import Sequence

import numpy as np

from .ir import (
    Apply, Around, AuxScope, Circuit, Controlled, GateKind, Instruction, QubitId, adjoint,
)

TOL = 1e-9
MAX_UNITARY_QUBITS = 12
MAX_STATE_QUBITS = 20


class NumericsError(ValueError):
    pass


class TooLargeError(NumericsError):
    pass


class UnresolvedAuxError(NumericsError):
    pass


class DimensionMismatchError(NumericsError):
    pass


class Mode(enum.Enum):
    EXACT = "exact"
    GLOBAL_PHASE = "global_phase"


_SQ2 = 1 / np.sqrt(2)
_FIXED = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
}


def rx(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(t: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]], dtype=complex)


def phase(t: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * t)]], dtype=complex)


_PARAM = {"RX": rx, "RY": ry, "RZ": rz, "P": phase}


def gate_matrix(gate: GateKind) -> np.ndarray:
    """The 2x2 (built-in) or 2^k x 2^k (library) matrix of a gate."""
    if gate.name in _FIXED:
        return _FIXED[gate.name]
    if gate.name in _PARAM:
        return _PARAM[gate.name](gate.params[0])
    from .passes.library import get_library

    entry = get_library().get(gate.name)
    if entry is None:
        raise KeyError(f"unknown gate {gate.name!r}")
    m = entry.approx_matrix if gate.approx else entry.matrix
    if m is None:
        raise KeyError(f"gate {gate.name!r} has no approximate variant")
    return m.conj().T if gate.dagger else m


def controlled_matrix(n_controls: int, u: np.ndarray) -> np.ndarray:
    """Block matrix sum_{k<2^n-1} |k><k| (x) I + |1..1><1..1| (x) U, controls leading."""
    d = u.shape[0]
    size = (2 ** n_controls) * d
    out = np.eye(size, dtype=complex)
    out[size - d:, size - d:] = u
    return out


def is_unitary(u: np.ndarray, tol: float = TOL) -> bool:
    return np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0]), "fro") <= tol


def basis_state(num_qubits: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(2 ** num_qubits, dtype=complex)
    psi[index] = 1
    return psi


# --------------------------------------------------------------------------
# tensor-contraction evaluator

def _axis_of(qb: QubitId) -> int:
    if qb.is_aux:
        raise UnresolvedAuxError(f"aux qubit {qb!r} has no concrete index")
    return qb.index


def _contract(t: np.ndarray, mat: np.ndarray, axes: list[int]) -> None:
    k = len(axes)
    g = mat.reshape((2,) * (2 * k))
    res = np.tensordot(g, t, axes=(list(range(k, 2 * k)), axes))
    t[...] = np.moveaxis(res, list(range(k)), axes)


def _evolve(t: np.ndarray, instrs: Sequence[Instruction], axis: dict) -> None:
    for ins in instrs:
        if isinstance(ins, Apply):
            _contract(t, gate_matrix(ins.gate), [axis[qb] for qb in ins.targets])
        elif isinstance(ins, Controlled):
            idx = [slice(None)] * t.ndim
            cut = sorted(axis[c] for c in ins.controls)
            for a in cut:
                idx[a] = 1
            sub = t[tuple(idx)]
            inner = {}
            for qb, a in axis.items():
                if a not in cut:
                    inner[qb] = a - sum(1 for c in cut if c < a)
            _evolve(sub, ins.body, inner)
        elif isinstance(ins, Around):
            _evolve(t, ins.outer, axis)
            _evolve(t, ins.body, axis)
            _evolve(t, adjoint(ins.outer), axis)
        elif isinstance(ins, AuxScope):
            raise UnresolvedAuxError("AuxScope must be resolved before simulation")
        else:
            raise TypeError(f"not an instruction: {ins!r}")


def _as_instrs(circuit) -> tuple[tuple[Instruction, ...], int]:
    if isinstance(circuit, Circuit):
        return circuit.instructions, circuit.num_qubits
    return tuple(circuit), 0


def _register(instrs, total_qubits: int | None, default: int) -> int:
    from .ir import qubits_of

    qs = qubits_of(instrs)
    for qb in qs:
        _axis_of(qb)
    need = max((qb.index + 1 for qb in qs), default=0)
    n = default if total_qubits is None else total_qubits
    n = max(n, need) if total_qubits is None else n
    if need > n:
        raise DimensionMismatchError(f"circuit uses {need} qubits, register has {n}")
    return n


def columns(circuit, cols: Sequence[int], total_qubits: int | None = None) -> np.ndarray:
    """Selected columns of the circuit unitary, shape (2^n, len(cols))."""
    instrs, default = _as_instrs(circuit)
    n = _register(instrs, total_qubits, default)
    if n > MAX_UNITARY_QUBITS:
        raise TooLargeError(f"{n} qubits exceeds the dense cap of {MAX_UNITARY_QUBITS}")
    dim = 2 ** n
    block = np.zeros((dim, len(cols)), dtype=complex)
    block[list(cols), np.arange(len(cols))] = 1
    t = block.reshape((2,) * n + (len(cols),))
    _evolve(t, instrs, {QubitId(i): i for i in range(n)})
    return t.reshape(dim, len(cols))


def unitary(circuit, total_qubits: int | None = None) -> np.ndarray:
    """Full matrix of a Circuit or instruction sequence on ``total_qubits`` qubits."""
    instrs, default = _as_instrs(circuit)
    n = _register(instrs, total_qubits, default)
    return columns(instrs, range(2 ** n), n)


# --------------------------------------------------------------------------
# bit-mask statevector evaluator

@lru_cache(maxsize=32)
def _indices(n: int) -> np.ndarray:
    return np.arange(2 ** n, dtype=np.int64)


def _library_expansion(gate: GateKind, targets) -> tuple[Instruction, ...]:
    from .passes.library import get_library

    return get_library()[gate.name].expand(targets, approx=gate.approx, dagger=gate.dagger)


def _sv_run(psi: np.ndarray, instrs, n: int, mask: int) -> None:
    idx = _indices(n)
    for ins in instrs:
        if isinstance(ins, Apply):
            if not ins.gate.builtin:
                _sv_run(psi, _library_expansion(ins.gate, ins.targets), n, mask)
                continue
            g = gate_matrix(ins.gate)
            bit = 1 << (n - 1 - _axis_of(ins.targets[0]))
            sel0 = idx[((idx & bit) == 0) & ((idx & mask) == mask)]
            sel1 = sel0 | bit
            a0, a1 = psi[sel0], psi[sel1]
            psi[sel0] = g[0, 0] * a0 + g[0, 1] * a1
            psi[sel1] = g[1, 0] * a0 + g[1, 1] * a1
        elif isinstance(ins, Controlled):
            extra = 0
            for c in ins.controls:
                extra |= 1 << (n - 1 - _axis_of(c))
            _sv_run(psi, ins.body, n, mask | extra)
        elif isinstance(ins, Around):
            _sv_run(psi, ins.outer, n, mask)
            _sv_run(psi, ins.body, n, mask)
            _sv_run(psi, adjoint(ins.outer), n, mask)
        elif isinstance(ins, AuxScope):
            raise UnresolvedAuxError("AuxScope must be resolved before simulation")
        else:
            raise TypeError(f"not an instruction: {ins!r}")


def apply(circuit, state: np.ndarray) -> np.ndarray:
    """Evolve a statevector gate by gate; returns a new array."""
    instrs, _ = _as_instrs(circuit)
    state = np.asarray(state, dtype=complex)
    n = int(round(np.log2(state.shape[0]))) if state.size else -1
    if n < 0 or 2 ** n != state.shape[0] or state.ndim != 1:
        raise DimensionMismatchError(f"state of length {state.shape} is not a qubit register")
    if isinstance(circuit, Circuit) and circuit.num_qubits != n:
        raise DimensionMismatchError(
            f"circuit register has {circuit.num_qubits} qubits, state has {n}")
    _register(instrs, n, n)
    if n > MAX_STATE_QUBITS:
        raise TooLargeError(f"{n} qubits exceeds the statevector cap of {MAX_STATE_QUBITS}")
    psi = state.copy()
    _sv_run(psi, instrs, n, 0)
    return psi


# --------------------------------------------------------------------------
# oracle

def equivalent(u: np.ndarray, v: np.ndarray, mode: Mode = Mode.EXACT, tol: float = TOL) -> bool:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"shapes differ: {u.shape} vs {v.shape}")
    if mode is Mode.GLOBAL_PHASE:
        u, v = canonical_phase(u, v, tol)
        if u is None:
            return False
    return bool(np.max(np.abs(u - v), initial=0.0) <= tol)


def canonical_phase(u: np.ndarray, v: np.ndarray, tol: float = TOL):
    """Strip the phase of u's first significant entry (row-major) from both matrices.

    Returns (None, None) when v is negligible where u is not.
    """
    flat = u.ravel()
    hits = np.flatnonzero(np.abs(flat) > tol)
    if hits.size == 0:
        return u, v
    k = hits[0]
    b = v.ravel()[k]
    if abs(b) <= tol:
        return None, None
    a = flat[k]
    return u * (abs(a) / a), v * (abs(b) / b)


def _check_split(circuit, main: int, aux: int) -> int:
    total = main + aux
    if isinstance(circuit, Circuit) and circuit.num_qubits != total:
        raise DimensionMismatchError(
            f"circuit register is {circuit.num_qubits} qubits, expected {main}+{aux}")
    return total


def aux_block(circuit, main: int, aux: int) -> np.ndarray:
    """Output columns for every main basis input with aux = |0...0>.

    Shape (2^main, 2^aux, 2^main): [main_out, aux_out, main_in].
    """
    total = _check_split(circuit, main, aux)
    cols = [m << aux for m in range(2 ** main)]
    if total <= MAX_UNITARY_QUBITS:
        out = columns(circuit, cols, total)
    elif total <= MAX_STATE_QUBITS and main <= 10:
        out = np.stack([apply(circuit, basis_state(total, c)) for c in cols], axis=1)
    else:
        raise TooLargeError(f"{main}+{aux} qubits exceeds the aux-check cap")
    return out.reshape(2 ** main, 2 ** aux, len(cols))


def aux_restored(circuit, main: int, aux: int, tol: float = TOL) -> bool:
    """True iff every main basis input with clean aux leaves the aux at |0...0>."""
    block = aux_block(circuit, main, aux)
    return bool(np.max(np.abs(block[:, 1:, :]), initial=0.0) <= tol)


def main_map(circuit, main: int, aux: int) -> np.ndarray:
    """The induced operator on main qubits with aux projected to |0...0> in and out."""
    return aux_block(circuit, main, aux)[:, 0, :]
