"""Ready-made circuits: the V-chain MCX, CNOT and the two R_XX spellings."""
from __future__ import annotations

from math import pi

from ..ancilla import fresh_ids
from ..ir import RZ, Circuit, H, adjoint, apply, around, controlled, cx, q, X
from ..passes.library import v_chain


def build_v_chain(n_controls: int) -> Circuit:
    """Controls on qubits 0..n-1, target on qubit n, one scoped aux per level."""
    if n_controls < 1:
        raise ValueError("need at least one control")
    controls = [q(i) for i in range(n_controls)]
    body = v_chain(controls, q(n_controls), ids=fresh_ids())
    return Circuit(n_controls + 1, body, name=f"v_chain_{n_controls}")


def build_cnot() -> Circuit:
    return Circuit(2, [controlled([q(0)], apply(X(), q(1)))], name="cnot")


def _rxx_conjugator():
    return [apply(H(), q(0)), apply(H(), q(1)), cx(q(0), q(1))]


def build_rxx_explicit(angle: float = pi) -> Circuit:
    u = _rxx_conjugator()
    return Circuit(2, [*u, apply(RZ(angle), q(1)), *adjoint(u)], name="rxx_xplct")


def build_rxx(angle: float = pi) -> Circuit:
    return Circuit(2, [around(_rxx_conjugator(), [apply(RZ(angle), q(1))])], name="rxx")
