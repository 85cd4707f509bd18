"""Core inverses of 2x2 block matrices ``M = [[A, B], [C, D]]``.

``M`` is split as ``P + Q`` with ``P = diag(A, D)`` and the anti-diagonal
``Q = [[0, B], [C, 0]]``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisNotMet, NotCoreInvertible, VerificationError
from .gen_inverse import (
    InverseKind,
    core_inverse,
    decide_invertible,
    drazin_inverse,
    group_inverse,
    verify_axioms,
)
from .matrix_core import DEFAULT_TOL, _square, as_matrix, fro, identity, normalized_residual, zeros
from .theorems import _Recorder


@dataclass(frozen=True)
class BlockMatrix2x2:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        shapes = {_square(x).shape for x in (self.A, self.B, self.C, self.D)}
        if len(shapes) != 1:
            raise ValueError(f"blocks must share one n x n shape, got {shapes}")

    @property
    def n(self):
        return self.A.shape[0]

    def assemble(self):
        return np.block([[as_matrix(self.A), as_matrix(self.B)], [as_matrix(self.C), as_matrix(self.D)]])

    @property
    def P(self):
        z = zeros(self.n)
        return np.block([[as_matrix(self.A), z], [z, as_matrix(self.D)]])

    @property
    def Q(self):
        return antidiag(self.B, self.C)

    def swapped(self):
        """The block matrix ``[[D, C], [B, A]]``."""
        return BlockMatrix2x2(self.D, self.C, self.B, self.A)

    @classmethod
    def split(cls, m, n=None):
        m = _square(m)
        if n is None:
            if m.shape[0] % 2:
                raise ValueError("odd-sized matrix needs an explicit split")
            n = m.shape[0] // 2
        if 2 * n != m.shape[0]:
            raise ValueError(f"cannot split a {m.shape[0]}x{m.shape[0]} matrix at n={n}")
        return cls(m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:])


def antidiag(b, c):
    b, c = _square(b), _square(c)
    z = zeros(b.shape[0])
    return np.block([[z, b], [c, z]])


def swap_matrix(n):
    z, i = zeros(n), identity(n)
    return np.block([[z, i], [i, z]])


def is_nilpotent(x, tol=DEFAULT_TOL):
    """``||X^n||_F <= atol + rtol ||X||_F^n`` for an n x n matrix ``X``.

    ``X`` is rescaled to unit norm first so the power cannot overflow.
    """
    x = _square(x)
    n = x.shape[0]
    nx = fro(x)
    if nx == 0.0:
        return True
    y = np.linalg.matrix_power(x / nx, n)
    # atol / ||X||^n, computed in log space
    log_abs = np.log(tol.atol) - n * np.log(nx) if tol.atol > 0 else -np.inf
    bound = tol.rtol + (np.exp(log_abs) if log_abs < 700 else np.inf)
    return fro(y) <= bound


def _spectral_drazin(x, tol):
    xd, _ = drazin_inverse(x, tol)
    return identity(x.shape[0]) - x @ xd


def antidiag_conditions(b, c, tol=DEFAULT_TOL):
    """Normalized residuals of ``B (CB)^pi`` and ``C (BC)^pi``.

    ``(CB)^pi`` is taken from the Drazin inverse, which always exists.
    """
    b, c = _square(b), _square(c)
    cb_pi = _spectral_drazin(c @ b, tol)
    bc_pi = _spectral_drazin(b @ c, tol)
    return (
        normalized_residual(b @ cb_pi, b, cb_pi),
        normalized_residual(c @ bc_pi, c, bc_pi),
    )


def antidiag_core_inverse(b, c, tol=DEFAULT_TOL, form=2):
    """Core inverse of ``Q = [[0, B], [C, 0]]`` from the block formula.

    ``form=2`` is ``[[0, (BC)^# B C C^c], [(CB)^# C B B^c, 0]]``;
    ``form=1`` is ``[[0, B (CB)^# C C^c], [C (BC)^# B B^c, 0]]``.

    Raises
    ------
    NotCoreInvertible
        If ``B`` or ``C`` has no core inverse.
    HypothesisNotMet
        If ``B (CB)^pi`` or ``C (BC)^pi`` is nonzero.
    """
    b, c = _square(b), _square(c)
    try:
        bc_core = core_inverse(b, tol)
        cc_core = core_inverse(c, tol)
    except NotCoreInvertible as exc:
        raise NotCoreInvertible(f"block: {exc}", exc.rank_a, exc.rank_a2) from None
    r1, r2 = antidiag_conditions(b, c, tol)
    if r1 > tol.residual_bound or r2 > tol.residual_bound:
        raise HypothesisNotMet(f"B(CB)^pi residual {r1:.2e}, C(BC)^pi residual {r2:.2e}")
    cb_g = group_inverse(c @ b, tol)
    bc_g = group_inverse(b @ c, tol)
    if form == 1:
        upper = b @ cb_g @ c @ cc_core
        lower = c @ bc_g @ b @ bc_core
    elif form == 2:
        upper = bc_g @ b @ c @ cc_core
        lower = cb_g @ c @ b @ bc_core
    else:
        raise ValueError("form must be 1 or 2")
    x = antidiag(upper, lower)
    q = antidiag(b, c)
    chk = verify_axioms(InverseKind.CORE, q, x, tol)
    if not chk.ok:
        raise VerificationError(f"block core formula failed axioms: {chk.residuals}")
    return x


def antidiag_group_inverse(b, c, tol=DEFAULT_TOL):
    """``Q^# = [[0, B (CB)^#], [C (BC)^#, 0]]``."""
    b, c = _square(b), _square(c)
    return antidiag(b @ group_inverse(c @ b, tol), c @ group_inverse(b @ c, tol))


def check_lemma_4_1(b, c, tol=DEFAULT_TOL, hypotheses_only=False):
    """Both block forms of ``Q^c`` and the form of ``Q^#`` against the
    directly computed inverses of ``Q``."""
    b, c = _square(b), _square(c)
    rec = _Recorder("lem4.1", tol, one_way=True)
    rec.core("B", b, hyp=True)
    rec.core("C", c, hyp=True)
    r1, r2 = antidiag_conditions(b, c, tol)
    rec.residual("B(CB)^pi=0", r1, hyp=True)
    rec.residual("C(BC)^pi=0", r2, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    q = antidiag(b, c)
    qc = rec.core("Q", q)
    if qc is None:
        return rec.done(False)
    f1 = antidiag_core_inverse(b, c, tol, form=1)
    f2 = antidiag_core_inverse(b, c, tol, form=2)
    rec.v.witnesses.update({"Q^c form1": f1, "Q^c form2": f2})
    ok1 = rec.equal("form1=Q^c", f1, qc, qc)
    ok2 = rec.equal("form2=Q^c", f2, qc, qc)
    qg = rec.group("Q", q)
    ok3 = qg is not None and rec.equal("Q^#", antidiag_group_inverse(b, c, tol), qg, qg)
    return rec.done(ok1 and ok2 and ok3)


def _block_hypotheses(rec, blocks, variant):
    A, B, C, D = (as_matrix(x) for x in (blocks.A, blocks.B, blocks.C, blocks.D))
    ac = rec.core("A", A, hyp=True)
    rec.core("B", B, hyp=True)
    rec.core("C", C, hyp=True)
    dc = rec.core("D", D, hyp=True)
    rec.equal("AB=BD", A @ B, B @ D, A, B, D, hyp=True)
    rec.equal("DC=CA", D @ C, C @ A, A, C, D, hyp=True)
    if variant == "4.2":
        rec.equal("A*B=BD*", A.conj().T @ B, B @ D.conj().T, A, B, D, hyp=True)
        rec.equal("D*C=CA*", D.conj().T @ C, C @ A.conj().T, A, C, D, hyp=True)
    else:
        rec.equal("B*A=DB*", B.conj().T @ A, D @ B.conj().T, A, B, D, hyp=True)
    r1, r2 = antidiag_conditions(B, C, rec.tol)
    rec.residual("B(CB)^pi=0", r1, hyp=True)
    rec.residual("C(BC)^pi=0", r2, hyp=True)
    if ac is not None and dc is not None:
        w = ac @ B @ dc @ C
        rec.flag("nilpotent(A^c B D^c C)", is_nilpotent(w, rec.tol), hyp=True)
        rec.v.witnesses["A^c B D^c C"] = w
    return ac, dc


def block_hypotheses(blocks, tol=DEFAULT_TOL, variant="4.2"):
    """Hypothesis flags only (used by generators)."""
    rec = _Recorder(f"thm{variant}", tol, one_way=True)
    _block_hypotheses(rec, blocks, variant)
    return rec.v


def _conclude(rec, m):
    mc = rec.core("M", m)
    return mc is not None and bool(verify_axioms(InverseKind.CORE, m, mc, rec.tol))


def check_thm_4_2(blocks, tol=DEFAULT_TOL, hypotheses_only=False):
    """Core invertibility of ``M`` under the commutation hypotheses with
    ``A*B = BD*`` and ``D*C = CA*``; conclusion checked on ``M`` directly."""
    rec = _Recorder("thm4.2", tol, one_way=True)
    ac, dc = _block_hypotheses(rec, blocks, "4.2")
    if not rec.met or hypotheses_only:
        return rec.done()
    P, Q = blocks.P, blocks.Q
    rec.equal("PQ=QP", P @ Q, Q @ P, P, Q)
    rec.equal("P*Q=QP*", P.conj().T @ Q, Q @ P.conj().T, P, Q)
    z = zeros(blocks.n)
    pc = np.block([[ac, z], [z, dc]])
    inv, amb = decide_invertible(identity(2 * blocks.n) + pc @ Q, tol)
    rec.flag("I+P^cQ invertible", inv, amb)
    return rec.done(_conclude(rec, blocks.assemble()))


def check_thm_4_4(blocks, tol=DEFAULT_TOL, hypotheses_only=False):
    """As :func:`check_thm_4_2` with ``B*A = DB*`` in place of the two
    starred conditions."""
    rec = _Recorder("thm4.4", tol, one_way=True)
    _block_hypotheses(rec, blocks, "4.4")
    if not rec.met or hypotheses_only:
        return rec.done()
    P, Q = blocks.P, blocks.Q
    rec.equal("QP=PQ", Q @ P, P @ Q, P, Q)
    rec.equal("Q*P=PQ*", Q.conj().T @ P, P @ Q.conj().T, P, Q)
    qc = rec.core("Q", Q)
    if qc is not None:
        inv, amb = decide_invertible(identity(2 * blocks.n) + qc @ P, tol)
        rec.flag("I+Q^cP invertible", inv, amb)
    return rec.done(_conclude(rec, blocks.assemble()))


def permuted_variant(blocks, tol=DEFAULT_TOL, variant="4.2"):
    """Apply the block theorem to ``[[D, C], [B, A]]`` and check that core
    invertibility carries over to ``M = J [[D, C], [B, A]] J``."""
    swapped = blocks.swapped()
    inner = check_thm_4_2(swapped, tol) if variant == "4.2" else check_thm_4_4(swapped, tol)
    rec = _Recorder(f"cor{'4.3' if variant == '4.2' else '4.5'}", tol, one_way=True)
    rec.v.hypotheses = {f"swapped:{k}": v for k, v in inner.hypotheses.items()}
    rec.v.hypothesis_residuals = dict(inner.hypothesis_residuals)
    rec.v.ambiguous = inner.ambiguous
    if not rec.met:
        return rec.done()
    m = blocks.assemble()
    j = swap_matrix(blocks.n)
    rec.equal("M=J M' J", m, j @ swapped.assemble() @ j, m)
    rec.flag("swapped conclusion", bool(inner.side1))
    return rec.done(_conclude(rec, m))


__all__ = [
    "BlockMatrix2x2",
    "antidiag",
    "swap_matrix",
    "is_nilpotent",
    "antidiag_conditions",
    "antidiag_core_inverse",
    "antidiag_group_inverse",
    "check_lemma_4_1",
    "block_hypotheses",
    "check_thm_4_2",
    "check_thm_4_4",
    "permuted_variant",
]
