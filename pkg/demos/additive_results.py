"""When is a + b core invertible?  Run the checkers on hand-picked and
generated pairs and tabulate both sides of each equivalence."""

import numpy as np

from coreinv import instance_gen as ig
from coreinv.suites import run_suite, truth_table
from coreinv.theorems import check_thm_2_4, check_thm_3_4

a = np.diag([2.0, 0.0])
b = np.array([[0, 0], [1, 3.0]])
v = check_thm_2_4(a, b)
print("triangular pair:", v.status, "sides", v.side1, v.side2)
print("  b^pi =\n", v.witnesses["b^pi"].real.round(4))

# A Jordan block plus a cancelling scalar: a + b is nilpotent,
# and the criterion correctly predicts failure.
lam = 0.5 + 0.5j
jordan = np.array([[lam, 1], [0, lam]])
v = check_thm_3_4(jordan, -lam * np.eye(2))
print("cancelling pair:", v.status, "sides", v.side1, v.side2)

# A non-normal double-commuting pair from the block family.
a, b = ig.gen_double_commuting_blocks(5, seed=11)
print("block pair:", check_thm_3_4(a, b).status,
      "| a normal?", np.allclose(a @ a.conj().T, a.conj().T @ a))

for sid in ("thm2.4", "thm2.6", "thm3.4", "cor3.5"):
    report = run_suite(sid, 200, seed=1)
    print(f"{sid:7s} {report['aggregate']}  truth table {truth_table(report['results'])}")
