"""Scoped aux qubits and the static uncomputation check."""
from qaround.ancilla import AuxPool, check_circuit, resolve_aux
from qaround.frontend import build_v_chain, emit_text, parse
from qaround.numerics import aux_restored

# The V-chain allocates one aux per recursion level.
vc = build_v_chain(4)
print(emit_text(vc))
print("checker:", check_circuit(vc).describe())

res = resolve_aux(vc)
print("peak aux:", res.peak)
print("oracle says restored:", aux_restored(res.circuit, res.circuit.num_main, res.circuit.num_aux))

# A Hadamard on an aux qubit is rejected with a path to the offending gate.
bad = parse("qubits 1\naux a[1] {\n  h a\n}")
print(check_circuit(bad).describe())

# The checker is pessimistic: X;X restores the aux but has no structural proof.
safe = parse("qubits 1\naux a[1] { x a; x a }")
print("accepted:", check_circuit(safe).accepted)

# The pool hands out the lowest free slots and takes them back.
pool = AuxPool(4)
qs = pool.allocate(2)
print("allocated:", qs, "free:", pool.free)
