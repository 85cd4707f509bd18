"""Pierce decomposition relative to an idempotent, and block-triangular
constructions of the group and core inverses.

Corner elements such as ``p a p`` are kept as full n x n matrices supported
in their corner.  Group and core inverses are unique, so the inverse of a
corner element computed in the whole matrix algebra is the corner inverse.
"""

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisNotMet, NotCoreInvertible, NotGroupInvertible, NotIdempotent, NotProjection, VerificationError
from .gen_inverse import (
    InverseKind,
    core_inverse,
    group_inverse,
    is_idempotent,
    is_projection,
    verify_axioms,
)
from .matrix_core import DEFAULT_TOL, _square, identity, normalized_residual, truncate_at_scale


@dataclass(frozen=True)
class PierceBlocks:
    p: np.ndarray
    b11: np.ndarray
    b12: np.ndarray
    b21: np.ndarray
    b22: np.ndarray

    @property
    def q(self):
        return identity(self.p.shape[0]) - self.p


def decompose(x, p, tol=DEFAULT_TOL):
    """Split ``x`` into ``pxp + pxq + qxp + qxq`` with ``q = I - p``."""
    x, p = _square(x), _square(p)
    if x.shape != p.shape:
        raise ValueError("x and p must have the same size")
    if not is_idempotent(p, tol):
        raise NotIdempotent("p is not idempotent")
    q = identity(p.shape[0]) - p
    return PierceBlocks(p, p @ x @ p, p @ x @ q, q @ x @ p, q @ x @ q)


def assemble(blocks):
    return blocks.b11 + blocks.b12 + blocks.b21 + blocks.b22


def _is_zero(m, tol, *factors):
    return normalized_residual(m, *factors) <= tol.residual_bound


def _corner(x, *factors):
    """Truncate a corner such as ``p a p`` at the scale of its factors."""
    return truncate_at_scale(x, float(np.prod([np.linalg.norm(f, 2) for f in factors])))


def _corner_group(x, name, tol):
    try:
        return group_inverse(x, tol)
    except NotGroupInvertible as exc:
        raise NotGroupInvertible(f"{name}: {exc}", exc.rank_a, exc.rank_a2) from None


def _corner_core(x, name, tol):
    try:
        return core_inverse(x, tol)
    except NotCoreInvertible as exc:
        raise NotCoreInvertible(f"{name}: {exc}", exc.rank_a, exc.rank_a2) from None


def triangular_group_inverse(p, a, tol=DEFAULT_TOL):
    """Group inverse of ``a`` that is lower triangular relative to ``p``.

    With ``q = I - p`` and ``p a q = 0``, ``a`` has corners ``pap``, ``qap``
    and ``aq``.  The result is ``(pap)^# + (aq)^# + z`` where ``z`` is the
    standard lower-left correction.

    Gates (each raises :class:`HypothesisNotMet`):

    * ``p a q = 0``;
    * ``(aq)^pi q a p a p = 0``;
    * ``(aq)^pi q a p (pap)^pi = 0``, the condition under which ``z`` is
      valid.  The previous gate alone admits nilpotent ``a``.
    """
    p, a = _square(p), _square(a)
    if not is_idempotent(p, tol):
        raise NotIdempotent("p is not idempotent")
    n = p.shape[0]
    i = identity(n)
    q = i - p
    if not _is_zero(p @ a @ q, tol, p, a, q):
        raise HypothesisNotMet("p a (1-p) != 0")
    pap = _corner(p @ a @ p, p, a, p)
    aq = _corner(a @ q, a, q)
    g1 = _corner_group(pap, "pap", tol)
    g2 = _corner_group(aq, "a(1-p)", tol)
    pi1 = i - pap @ g1
    pi2 = i - aq @ g2
    c = q @ a @ p
    if not _is_zero(pi2 @ c @ a @ p, tol, pi2, c, a):
        raise HypothesisNotMet("(a(1-p))^pi (1-p) a p a p != 0")
    if not _is_zero(pi2 @ c @ pi1, tol, pi2, c, pi1):
        raise HypothesisNotMet("(a(1-p))^pi (1-p) a p (pap)^pi != 0")
    z = g2 @ g2 @ c @ pi1 + pi2 @ c @ g1 @ g1 - g2 @ c @ g1
    x = g1 + g2 + z
    chk = verify_axioms(InverseKind.GROUP, a, x, tol)
    if not chk.ok:
        raise VerificationError(f"triangular group inverse failed axioms: {chk.residuals}")
    return x


def triangular_one_three(p, a, tol=DEFAULT_TOL):
    """The block (1,3)-inverse ``[(pap)^c, 0; -(aq)^c (qap) (pap)^c, (aq)^c]``."""
    p, a = _square(p), _square(a)
    q = identity(p.shape[0]) - p
    c1 = _corner_core(_corner(p @ a @ p, p, a, p), "pap", tol)
    c2 = _corner_core(_corner(a @ q, a, q), "a(1-p)", tol)
    return c1 + c2 - c2 @ (q @ a @ p) @ c1


def triangular_core_inverse(p, a, tol=DEFAULT_TOL):
    """Core inverse of ``a`` lower triangular relative to the projection ``p``.

    Requires ``p a q = 0``, core invertible corners ``pap`` and ``aq`` and
    ``(aq)^pi q a p = 0``.  Returns ``a^# a x`` with ``x`` from
    :func:`triangular_one_three`; the result satisfies ``p a^c q = 0``.
    """
    p, a = _square(p), _square(a)
    if not is_projection(p, tol):
        raise NotProjection("p is not a projection")
    i = identity(p.shape[0])
    q = i - p
    if not _is_zero(p @ a @ q, tol, p, a, q):
        raise HypothesisNotMet("p a (1-p) != 0")
    aq = _corner(a @ q, a, q)
    try:
        g2 = group_inverse(aq, tol)
        c1 = _corner_core(_corner(p @ a @ p, p, a, p), "pap", tol)
    except NotGroupInvertible as exc:
        raise NotCoreInvertible(str(exc), exc.rank_a, exc.rank_a2) from None
    pi2 = i - aq @ g2
    c = q @ a @ p
    if not _is_zero(pi2 @ c, tol, pi2, c):
        raise HypothesisNotMet("(a(1-p))^pi (1-p) a p != 0")
    x = triangular_one_three(p, a, tol)
    try:
        ag = triangular_group_inverse(p, a, tol)
    except HypothesisNotMet as exc:  # pragma: no cover - implied by the gate above
        raise VerificationError(f"group step failed: {exc}") from None
    out = ag @ a @ x
    chk = verify_axioms(InverseKind.CORE, a, out, tol)
    if not chk.ok:
        raise VerificationError(f"triangular core inverse failed axioms: {chk.residuals}")
    if not _is_zero(p @ out @ q, tol, out):
        raise VerificationError("p a^core (1-p) != 0")
    return out
