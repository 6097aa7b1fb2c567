"""Gate classes and the relative-phase Toffoli substitution."""
import numpy as np

from qaround.classify import classify_instrs, extract_permutation
from qaround.ir import RZ, Circuit, H, apply, around, controlled, cx, mcx, q
from qaround.numerics import equivalent, unitary
from qaround.passes import substitute_approximate
from qaround.passes.library import get_library

toffoli = mcx([q(0), q(1)], q(2))
print("Toffoli:", classify_instrs([toffoli]).name)
print("controlled RZ:", classify_instrs([controlled([q(0)], apply(RZ(0.3), q(1)))]).name)
print("H:", classify_instrs([apply(H(), q(0))]).name)

# The permutation behind a Toffoli, read back from its matrix.
spec = extract_permutation(unitary([toffoli], 3))
print("perm:", spec.perm)

# The relative-phase version differs by a diagonal defect.
entry = get_library()["ccx"]
print("defect phases:", np.round(entry.approx_defect.phases, 3))

# Inside around(Toffoli, body) the defect cancels when the body only
# uses the permuted qubits as controls or through diagonal gates.
good = Circuit(4, [around([toffoli], [cx(q(2), q(3))])])
out, report = substitute_approximate(good)
print(report.as_json(), "equal:", equivalent(unitary(good), unitary(out)))

# A Hadamard on the Toffoli target would expose the defect, so it is kept.
bad = Circuit(4, [around([toffoli], [apply(H(), q(2))])])
out, report = substitute_approximate(bad)
print(report.as_json(), report.notes)
