"""CNOT counts of the V-chain with and without the optimizations."""
import numpy as np

from qaround.frontend import build_v_chain, stats
from qaround.numerics import Mode, controlled_matrix, equivalent, main_map
from qaround.passes import run_pipeline

print(" n  none   all  ratio")
for n in range(3, 9):
    none = stats(run_pipeline(build_v_chain(n), "none")[0]).counts["cx"]
    best = stats(run_pipeline(build_v_chain(n), "all")[0]).counts["cx"]
    print(f"{n:2d} {none:5d} {best:5d}  {best / none:.3f}")

# What each pass did at six controls.
out, reports = run_pipeline(build_v_chain(6), "all")
for r in reports:
    print(r.as_json())
print(stats(out).as_json()["counts"])

# The optimized circuit still computes C^5 X once the aux is projected out.
out, _ = run_pipeline(build_v_chain(5), "all")
u = main_map(out, out.num_main, out.num_aux)
print("C^5 X:", equivalent(u, controlled_matrix(5, np.array([[0, 1], [1, 0]])), Mode.GLOBAL_PHASE))
