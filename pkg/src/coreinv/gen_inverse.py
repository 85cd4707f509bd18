"""Generalized inverses of square complex matrices and related predicates.

All routines take a :class:`~coreinv.matrix_core.Tolerance`; it drives both
the rank decisions (which inverse exists) and the axiom checks.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NotCoreInvertible, NotGroupInvertible, Singular
from .matrix_core import (
    DEFAULT_TOL,
    approx_eq,
    as_matrix,
    fro,
    identity,
    rank,
    rank_factorization,
    rank_margin,
    range_equal,
    truncate_at_scale,
    zeros,
    _square,
)

# GF (the core of the group-inverse construction) above this is untrustworthy.
ILL_CONDITIONED = 1e12


class InverseKind(enum.Enum):
    MOORE_PENROSE = "mp"
    ONE_THREE = "1,3"
    GROUP = "group"
    DRAZIN = "drazin"
    CORE = "core"


def moore_penrose(a, tol=DEFAULT_TOL):
    """Moore-Penrose inverse via a truncated SVD."""
    a = as_matrix(a)
    m, n = a.shape
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s.size == 0:
        return zeros(n, m)
    r = int(np.count_nonzero(s > tol.rank_threshold(s[0])))
    return (vh[:r].conj().T / s[:r]) @ u[:, :r].conj().T


def _group_core(a, tol):
    """Return (F, GF, G) for A = F G, raising if GF is singular."""
    fac = rank_factorization(a, tol)
    if fac.r == 0:
        return fac, None
    gf = fac.G @ fac.F
    r_gf = rank(gf, tol)
    if r_gf < fac.r:
        raise NotGroupInvertible(
            f"rank(A)={fac.r}, rank(A^2)={r_gf}: not group invertible",
            fac.r,
            r_gf,
        )
    return fac, gf


def group_inverse(a, tol=DEFAULT_TOL):
    """Group inverse ``X = F (GF)^-2 G`` from a rank factorization ``A = FG``.

    Raises
    ------
    NotGroupInvertible
        If rank(A) != rank(A^2).
    """
    a = _square(a)
    fac, gf = _group_core(a, tol)
    if gf is None:
        return zeros(a.shape[0])
    gf_inv = np.linalg.solve(gf, identity(fac.r))
    return fac.F @ gf_inv @ gf_inv @ fac.G


def group_condition(a, tol=DEFAULT_TOL):
    """Condition number of GF; large values flag numerically ambiguous input."""
    fac = rank_factorization(a, tol)
    if fac.r == 0:
        return 1.0
    return float(np.linalg.cond(fac.G @ fac.F))


def drazin_index(a, tol=DEFAULT_TOL):
    """Smallest k >= 0 with rank(A^k) = rank(A^(k+1))."""
    a = _square(a)
    n = a.shape[0]
    norm = np.linalg.norm(a, 2)
    prev_rank, power = n, identity(n)
    for k in range(n + 1):
        power = power @ a
        r = rank(truncate_at_scale(power, norm ** (k + 1)), tol)
        if r == prev_rank:
            return k
        prev_rank = r
    return n


def drazin_inverse(a, tol=DEFAULT_TOL):
    """Drazin inverse and index.

    With ``k`` the index, ``range(A^k)`` and ``null(A^k)`` are complementary
    and invariant under ``A``.  In a basis adapted to them ``A`` is
    ``diag(A1, N)`` with ``A1`` invertible and ``N`` nilpotent, and the
    Drazin inverse is ``diag(A1^-1, 0)``.  This avoids forming the badly
    conditioned power ``A^(2k+1)``.

    Returns
    -------
    (ndarray, int)
    """
    a = _square(a)
    n = a.shape[0]
    k = drazin_index(a, tol)
    if k == 0:
        return np.linalg.solve(a, identity(n)), 0
    ak = truncate_at_scale(np.linalg.matrix_power(a, k), np.linalg.norm(a, 2) ** k)
    u, _, vh = np.linalg.svd(ak)
    r = rank(ak, tol)
    t = np.hstack([u[:, :r], vh[r:].conj().T])
    a1 = np.linalg.solve(t, a @ t)[:r, :r]
    body = zeros(n)
    body[:r, :r] = np.linalg.solve(a1, identity(r))
    return t @ body @ np.linalg.solve(t, identity(n)), k


def core_inverse(a, tol=DEFAULT_TOL):
    """Core inverse ``A^# A A^+``.

    Over complex matrices the Moore-Penrose inverse is always a
    (1,3)-inverse, so the core inverse exists exactly when the group inverse
    does.
    """
    a = _square(a)
    try:
        g = group_inverse(a, tol)
    except NotGroupInvertible as exc:
        raise NotCoreInvertible(
            f"rank(A)={exc.rank_a}, rank(A^2)={exc.rank_a2}: not core invertible",
            exc.rank_a,
            exc.rank_a2,
        ) from None
    return g @ a @ moore_penrose(a, tol)


def core_projection(a, tol=DEFAULT_TOL):
    """The projection ``p = I - A A^+`` (so that ``p A = 0``)."""
    a = _square(a)
    return identity(a.shape[0]) - a @ moore_penrose(a, tol)


def core_inverse_via_projection(a, tol=DEFAULT_TOL):
    """Core inverse as ``(A + p)^-1 (I - p)`` with ``p = I - A A^+``."""
    a = _square(a)
    p = core_projection(a, tol)
    ap = a + p
    if rank(ap, tol) < a.shape[0]:
        ra = rank(a, tol)
        raise NotCoreInvertible(
            f"A + p is singular: rank(A)={ra}, rank(A^2)={rank(a @ a, tol)}",
            ra,
        )
    return np.linalg.solve(ap, identity(a.shape[0]) - p)


def spectral_idempotent(a, tol=DEFAULT_TOL):
    """``I - A A^#``."""
    a = _square(a)
    return identity(a.shape[0]) - a @ group_inverse(a, tol)


def is_group_invertible(a, tol=DEFAULT_TOL):
    a = _square(a)
    return rank(a, tol) == rank(a @ a, tol)


is_core_invertible = is_group_invertible


def is_projection(p, tol=DEFAULT_TOL):
    p = _square(p)
    return approx_eq(p @ p, p, tol) and approx_eq(p.conj().T, p, tol)


def is_idempotent(p, tol=DEFAULT_TOL):
    p = _square(p)
    return approx_eq(p @ p, p, tol)


def is_ep(a, tol=DEFAULT_TOL):
    """Group invertible with range(A) = range(A*)."""
    a = _square(a)
    return is_group_invertible(a, tol) and range_equal(a, a.conj().T, tol)


# --- axiom verification ---------------------------------------------------


@dataclass
class AxiomCheck:
    """Per-axiom residuals, each normalized by ``1 + ||A|| ||X||``."""

    kind: InverseKind
    residuals: dict = field(default_factory=dict)
    bound: float = 0.0

    @property
    def ok(self):
        return all(r <= self.bound for r in self.residuals.values())

    @property
    def max_residual(self):
        return max(self.residuals.values(), default=0.0)

    def __bool__(self):
        return self.ok


def _axiom_residuals(kind, a, x, tol):
    ax = a @ x
    xa = x @ a
    eqs = {}
    if kind in (InverseKind.MOORE_PENROSE, InverseKind.ONE_THREE, InverseKind.GROUP):
        eqs["AXA=A"] = ax @ a - a
    if kind in (InverseKind.MOORE_PENROSE, InverseKind.GROUP):
        eqs["XAX=X"] = xa @ x - x
    if kind in (InverseKind.MOORE_PENROSE, InverseKind.ONE_THREE, InverseKind.CORE):
        eqs["(AX)*=AX"] = ax.conj().T - ax
    if kind is InverseKind.MOORE_PENROSE:
        eqs["(XA)*=XA"] = xa.conj().T - xa
    if kind is InverseKind.GROUP:
        eqs["AX=XA"] = ax - xa
    if kind is InverseKind.CORE:
        eqs["XA^2=A"] = xa @ a - a
        eqs["AX^2=X"] = ax @ x - x
    if kind is InverseKind.DRAZIN:
        k = drazin_index(a, tol)
        ak = np.linalg.matrix_power(a, k)
        eqs["XA^(k+1)=A^k"] = xa @ ak - ak
        eqs["XAX=X"] = xa @ x - x
        eqs["AX=XA"] = ax - xa
    return eqs


def verify_axioms(kind, a, x, tol=DEFAULT_TOL):
    """Evaluate the defining equations of ``kind`` for the pair (A, X).

    Returns an :class:`AxiomCheck`, truthy when every normalized residual is
    within ``tol.residual_bound``.
    """
    a, x = as_matrix(a), as_matrix(x)
    if a.shape[1] != x.shape[0] or a.shape[0] != x.shape[1]:
        raise ValueError(f"non-conformable pair {a.shape}, {x.shape}")
    kind = InverseKind(kind)
    scale = 1.0 + fro(a) * fro(x)
    res = {k: fro(v) / scale for k, v in _axiom_residuals(kind, a, x, tol).items()}
    return AxiomCheck(kind, res, tol.residual_bound)


# --- decision with a confidence flag ----------------------------------------


@dataclass
class CoreDecision:
    """Outcome of deciding core invertibility of one matrix.

    ``ambiguous`` is set when a rank decision is borderline, when GF is
    ill-conditioned, or when the constructed inverse fails its axioms.
    """

    invertible: bool
    inverse: np.ndarray = None
    ambiguous: bool = False
    rank_a: int = 0
    rank_a2: int = 0
    residual: float = 0.0


def decide_core(a, tol=DEFAULT_TOL):
    a = _square(a)
    ra, amb1 = rank_margin(a, tol)
    ra2, amb2 = rank_margin(a @ a, tol)
    out = CoreDecision(ra == ra2, None, amb1 or amb2, ra, ra2)
    if not out.invertible:
        return out
    try:
        x = core_inverse(a, tol)
    except NotCoreInvertible:
        out.invertible = False
        out.ambiguous = True
        return out
    if group_condition(a, tol) > ILL_CONDITIONED:
        out.ambiguous = True
    chk = verify_axioms(InverseKind.CORE, a, x, tol)
    out.inverse = x
    out.residual = chk.max_residual
    if not chk.ok:
        out.ambiguous = True
    return out


def decide_group(a, tol=DEFAULT_TOL):
    """Like :func:`decide_core` but returns the group inverse."""
    a = _square(a)
    ra, amb1 = rank_margin(a, tol)
    ra2, amb2 = rank_margin(a @ a, tol)
    out = CoreDecision(ra == ra2, None, amb1 or amb2, ra, ra2)
    if not out.invertible:
        return out
    try:
        x = group_inverse(a, tol)
    except NotGroupInvertible:
        out.invertible = False
        out.ambiguous = True
        return out
    chk = verify_axioms(InverseKind.GROUP, a, x, tol)
    out.inverse = x
    out.residual = chk.max_residual
    if not chk.ok or group_condition(a, tol) > ILL_CONDITIONED:
        out.ambiguous = True
    return out


def decide_invertible(a, tol=DEFAULT_TOL):
    """(invertible, ambiguous) for an ordinary inverse."""
    a = _square(a)
    r, amb = rank_margin(a, tol)
    return r == a.shape[0], amb


__all__ = [
    "InverseKind",
    "AxiomCheck",
    "CoreDecision",
    "moore_penrose",
    "group_inverse",
    "group_condition",
    "drazin_index",
    "drazin_inverse",
    "core_inverse",
    "core_projection",
    "core_inverse_via_projection",
    "spectral_idempotent",
    "is_group_invertible",
    "is_core_invertible",
    "is_projection",
    "is_idempotent",
    "is_ep",
    "verify_axioms",
    "decide_core",
    "decide_group",
    "decide_invertible",
    "Singular",
]
