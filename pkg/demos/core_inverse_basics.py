"""Core, group and Moore-Penrose inverses side by side on small matrices."""

import numpy as np

from coreinv import core_inverse, core_inverse_via_projection, group_inverse, is_ep, moore_penrose, verify_axioms
from coreinv.errors import NotCoreInvertible

np.set_printoptions(precision=4, suppress=True)

# An idempotent that is not Hermitian: its group inverse is itself,
# but the core inverse is the orthogonal projector onto its range.
a = np.array([[1, 1], [0, 0]], dtype=complex)
print("A =\n", a.real)
print("A^+ =\n", moore_penrose(a).real)
print("A^# =\n", group_inverse(a).real)
print("A^core =\n", core_inverse(a).real)
print("via (A + p)^-1 (I - p):\n", core_inverse_via_projection(a).real)
print("EP?", is_ep(a))

# The core inverse satisfies three equations; print their residuals.
chk = verify_axioms("core", a, core_inverse(a))
for name, r in chk.residuals.items():
    print(f"  {name:10s} {r:.1e}")

# A nilpotent matrix loses rank when squared, so it has no core inverse.
try:
    core_inverse([[0, 1], [0, 0]])
except NotCoreInvertible as exc:
    print("nilpotent:", exc)

# For an EP matrix the core and group inverses coincide.
rng = np.random.default_rng(0)
u, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
ep = u @ np.diag([2, -1j, 0, 0]) @ u.conj().T
print("EP matrix: |core - group| =", np.linalg.norm(core_inverse(ep) - group_inverse(ep)))
