"""Core inverses of 2x2 block matrices built from commuting blocks."""

import numpy as np

from coreinv import instance_gen as ig
from coreinv.block4 import BlockMatrix2x2, antidiag, antidiag_core_inverse, check_thm_4_2
from coreinv.gen_inverse import core_inverse

np.set_printoptions(precision=4, suppress=True)

# The anti-diagonal part on its own: both block formulas agree with the
# directly computed core inverse.
b, c = ig.gen_antidiag_pair(3, seed=4)
q = antidiag(b, c)
for form in (1, 2):
    err = np.linalg.norm(antidiag_core_inverse(b, c, form=form) - core_inverse(q))
    print(f"form {form}: distance to direct core inverse {err:.1e}")

one = lambda x: np.array([[x]], dtype=complex)  # noqa: E731
swap = BlockMatrix2x2(one(0), one(1), one(1), one(0))
v = check_thm_4_2(swap)
print("swap matrix:", v.status, "\n", v.witnesses["core(M)"].real)

blocked = BlockMatrix2x2(one(1), one(1), one(1), one(1))
print("all ones:", check_thm_4_2(blocked).status, "(A^c B D^c C = 1 is not nilpotent)")

# Generated instances: hypotheses hold and M is core invertible.
for seed in range(5):
    blocks = ig.gen_block4_instance(3, seed)
    v = check_thm_4_2(blocks)
    print(f"seed {seed}: {v.status}, |A^c B D^c C| = {np.linalg.norm(v.witnesses['A^c B D^c C']):.1e}")
