"""Build small circuits in the IR and check them against the two evaluators."""
import numpy as np

from qaround.frontend import build_rxx, build_rxx_explicit, parse
from qaround.ir import H, X, adjoint, apply, controlled, cx, q
from qaround.numerics import Mode, apply as run, basis_state, equivalent, unitary

# A CNOT is a controlled X.  Qubit 0 is the most significant bit.
cnot = controlled([q(0)], apply(X(), q(1)))
print(np.real(unitary([cnot], 2)).astype(int))

# around(A, B) means A, then B, then the adjoint of A.
a = [apply(H(), q(0)), apply(H(), q(1)), cx(q(0), q(1))]
print("adjoint of A:", adjoint(a))

# The two R_XX spellings give the same matrix.
u1, u2 = unitary(build_rxx_explicit()), unitary(build_rxx())
print("explicit == around:", equivalent(u1, u2, Mode.EXACT))

# The same program written in the text language.
prog = parse("qubits 2\naround { h q0; h q1; ctrl q0 { x q1 } } { rz pi q1 }")
print("parsed == built:", equivalent(unitary(prog), u2))

# The statevector evaluator agrees with the dense one.
psi = basis_state(2, 0)
print("apply vs unitary:", np.allclose(run(prog, psi), u2 @ psi))

# Global phase is ignored only when asked for.
print(equivalent(u1, 1j * u1, Mode.EXACT), equivalent(u1, 1j * u1, Mode.GLOBAL_PHASE))
