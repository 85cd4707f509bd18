"""Executable checks of the additive and commutation results for core inverses.

Each ``check_*`` function evaluates the hypotheses of one result on concrete
matrices and, when they hold, decides both sides of the equivalence (or the
conclusion of a one-way statement) independently.  Whether a matrix is core
invertible is decided by the rank test and confirmed by verifying the axioms
of the constructed inverse; the hypotheses are never used to decide a side.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import CoreInvError
from .gen_inverse import (
    InverseKind,
    decide_core,
    decide_group,
    decide_invertible,
    is_projection,
    verify_axioms,
)
from .matrix_core import (
    DEFAULT_TOL,
    _square,
    fro,
    identity,
    normalized_residual,
    range_equal,
    rank_margin,
)
from .pierce import triangular_core_inverse, triangular_group_inverse

AMBIGUITY_FACTOR = 10.0


@dataclass
class TheoremVerdict:
    """Structured outcome of one theorem check.

    ``side2`` is ``None`` for one-way statements, whose conclusion is stored
    in ``side1``.
    """

    theorem_id: str
    hypotheses: dict = field(default_factory=dict)
    hypothesis_residuals: dict = field(default_factory=dict)
    side1: bool = None
    side2: bool = None
    one_way: bool = False
    ambiguous: bool = False
    residuals: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    axiom_residual: float = 0.0

    @property
    def hypotheses_met(self):
        return all(self.hypotheses.values())

    @property
    def biconditional_ok(self):
        if not self.hypotheses_met or self.one_way:
            return None
        return self.side1 == self.side2

    @property
    def status(self):
        if not self.hypotheses_met:
            return "not_met"
        if self.ambiguous:
            return "ambiguous"
        ok = bool(self.side1) if self.one_way else self.side1 == self.side2
        return "pass" if ok else "fail"

    @property
    def passed(self):
        return self.status == "pass"

    @property
    def max_residual(self):
        return self.axiom_residual

    def to_json(self):
        return {
            "theorem_id": self.theorem_id,
            "hypotheses": dict(self.hypotheses),
            "side1": self.side1,
            "side2": self.side2,
            "status": self.status,
            "pass": self.passed,
            "max_residual": self.max_residual,
            "witness_norms": {k: fro(v) for k, v in sorted(self.witnesses.items())},
        }


class _Recorder:
    """Accumulates flags and residuals for one verdict."""

    def __init__(self, theorem_id, tol, one_way=False):
        self.tol = tol
        self.v = TheoremVerdict(theorem_id, one_way=one_way)

    def _amb(self, r):
        b = self.tol.residual_bound
        return b / AMBIGUITY_FACTOR < r <= b * AMBIGUITY_FACTOR

    def zero(self, name, m, *factors, hyp=False):
        """Record whether ``m`` vanishes relative to the scale of ``factors``."""
        return self.residual(name, normalized_residual(m, *factors), hyp=hyp)

    def residual(self, name, r, hyp=False):
        ok = r <= self.tol.residual_bound
        if self._amb(r):
            self.v.ambiguous = True
        if hyp:
            self.v.hypotheses[name] = ok
            self.v.hypothesis_residuals[name] = r
        else:
            self.v.residuals[name] = r
        return ok

    def equal(self, name, x, y, *factors, hyp=False):
        return self.zero(name, x - y, *factors, hyp=hyp)

    def flag(self, name, ok, ambiguous=False, hyp=False):
        if ambiguous:
            self.v.ambiguous = True
        if hyp:
            self.v.hypotheses[name] = bool(ok)
        else:
            self.v.flags[name] = bool(ok)
        return bool(ok)

    def core(self, name, x, hyp=False):
        """Decide core invertibility of ``x``; return the inverse or None."""
        d = decide_core(x, self.tol)
        self.flag(f"core_invertible({name})", d.invertible, d.ambiguous, hyp=hyp)
        if d.invertible and d.inverse is not None:
            self.v.witnesses[f"core({name})"] = d.inverse
            self.v.axiom_residual = max(self.v.axiom_residual, d.residual)
            return d.inverse
        return None

    def group(self, name, x, hyp=False):
        d = decide_group(x, self.tol)
        self.flag(f"group_invertible({name})", d.invertible, d.ambiguous, hyp=hyp)
        if d.invertible and d.inverse is not None:
            self.v.witnesses[f"group({name})"] = d.inverse
            return d.inverse
        return None

    def ep(self, name, a, hyp=True):
        """EP test: group invertible and range(a) = range(a*)."""
        d = decide_group(a, self.tol)
        _, amb1 = rank_margin(np.hstack([a, a.conj().T]), self.tol)
        eq = d.invertible and range_equal(a, a.conj().T, self.tol)
        self.flag(f"ep({name})", eq, d.ambiguous or amb1, hyp=hyp)
        if d.invertible and d.inverse is not None:
            self.v.witnesses[f"group({name})"] = d.inverse
            return d.inverse if eq else None
        return None

    @property
    def met(self):
        return self.v.hypotheses_met

    def done(self, side1=None, side2=None):
        self.v.side1 = side1
        self.v.side2 = side2
        return self.v


def _pair(a, b):
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise ValueError("a and b must have the same size")
    return a, b, identity(a.shape[0])


def _double_commute(rec, a, b):
    rec.equal("ab=ba", a @ b, b @ a, a, b, hyp=True)
    rec.equal("a*b=ba*", a.conj().T @ b, b @ a.conj().T, a, b, hyp=True)


# --- sums with an EP or projection structure --------------------------------


def check_lemma_2_1(p, a, tol=DEFAULT_TOL, hypotheses_only=False):
    """``(a q)(a q)^# = (a a^#) q`` for idempotent ``p``, ``q = 1 - p``, ``paq = 0``."""
    p, a, i = _pair(p, a)
    rec = _Recorder("lem2.1", tol, one_way=True)
    rec.zero("p^2=p", p @ p - p, p, hyp=True)
    q = i - p
    rec.zero("paq=0", p @ a @ q, p, a, q, hyp=True)
    ag = rec.group("a", a, hyp=True)
    aqg = rec.group("aq", a @ q, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    aq = a @ q
    ok = rec.equal("(aq)(aq)^#=(aa^#)q", aq @ aqg, a @ ag @ q, aq, aqg)
    return rec.done(ok)


def check_lemma_2_2(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """``(1 - a^c a) b = 0`` iff ``(1 - a a^c) b = 0``."""
    a, b, i = _pair(a, b)
    rec = _Recorder("lem2.2", tol)
    ac = rec.core("a", a, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    s1 = rec.zero("(1-a^c a)b", (i - ac @ a) @ b, ac, a, b)
    s2 = rec.zero("(1-a a^c)b", (i - a @ ac) @ b, ac, a, b)
    return rec.done(s1, s2)


def check_lemma_2_3(p, a, tol=DEFAULT_TOL, hypotheses_only=False):
    """Triangular core-invertibility criterion relative to a projection ``p``.

    Conclusion: ``a`` core invertible with ``p a^c (1-p) = 0``.  The
    triangular formulas are cross-checked against the direct inverses.
    """
    p, a, i = _pair(p, a)
    rec = _Recorder("lem2.3", tol, one_way=True)
    rec.flag("projection(p)", is_projection(p, tol), hyp=True)
    q = i - p
    rec.zero("paq=0", p @ a @ q, p, a, q, hyp=True)
    rec.core("pap", p @ a @ p, hyp=True)
    aqg = rec.group("aq", a @ q, hyp=True)
    if not rec.met:
        return rec.done()
    pi2 = i - (a @ q) @ aqg
    rec.zero("(aq)^pi q a p=0", pi2 @ q @ a @ p, pi2, a, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    # the stronger form used in the group-inverse step
    rec.v.flags["(aq)^pi q a p a p=0"] = (
        normalized_residual(pi2 @ q @ a @ p @ a @ p, pi2, a, a) <= tol.residual_bound
    )
    ac = rec.core("a", a)
    if ac is None:
        return rec.done(False)
    concl = rec.zero("p a^c q", p @ ac @ q, ac)
    try:
        tg = triangular_group_inverse(p, a, tol)
        tc = triangular_core_inverse(p, a, tol)
    except CoreInvError as exc:
        rec.flag("formulas_agree", False)
        rec.v.flags["formula_error"] = type(exc).__name__
        return rec.done(False)
    ag = rec.group("a", a)
    rec.v.witnesses["triangular_group"] = tg
    rec.v.witnesses["triangular_core"] = tc
    agree_g = ag is not None and rec.equal("triangular_group=a^#", tg, ag, ag)
    agree_c = rec.equal("triangular_core=a^c", tc, ac, ac)
    rec.flag("formulas_agree", agree_g and agree_c)
    return rec.done(concl and agree_g and agree_c)


def check_thm_2_4(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """EP ``a``, core invertible ``b`` and ``b a^pi`` with ``a b a^pi = 0``.

    side1: ``a + b`` core invertible and ``a (a+b)^c a^pi = 0``.
    side2: ``a (1 + a^# b)`` core invertible and ``b^pi a^pi b = 0``.
    """
    a, b, i = _pair(a, b)
    rec = _Recorder("thm2.4", tol)
    ag = rec.ep("a", a)
    rec.core("b", b, hyp=True)
    if not rec.met:
        return rec.done()
    api = i - a @ ag
    rec.core("ba^pi", b @ api, hyp=True)
    rec.zero("aba^pi=0", a @ b @ api, a, b, api, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    bg = rec.group("b", b)
    bpi = i - b @ bg
    rec.v.witnesses.update({"a^pi": api, "b^pi": bpi})

    s = a + b
    sc = rec.core("a+b", s)
    side1 = sc is not None and rec.zero("a(a+b)^c a^pi", a @ sc @ api, a, sc, api)
    w = a @ (i + ag @ b)
    wc = rec.core("a(1+a^#b)", w)
    c2 = rec.zero("b^pi a^pi b", bpi @ api @ b, bpi, api, b)
    side2 = wc is not None and c2
    return rec.done(side1, side2)


def check_cor_2_5(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """Double-commuting EP ``a`` and core invertible ``b``:
    ``a + b`` core invertible iff ``a(1 + a^# b)`` is."""
    a, b, i = _pair(a, b)
    rec = _Recorder("cor2.5", tol)
    ag = rec.ep("a", a)
    rec.core("b", b, hyp=True)
    _double_commute(rec, a, b)
    if not rec.met or hypotheses_only:
        return rec.done()
    side1 = rec.core("a+b", a + b) is not None
    side2 = rec.core("a(1+a^#b)", a @ (i + ag @ b)) is not None
    return rec.done(side1, side2)


def check_thm_2_6(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """Sum of two EP elements.

    Hypotheses: ``a, b`` EP; ``a b^pi``, ``b a^pi`` core invertible;
    ``a b a^pi = b a b^pi = 0``.
    """
    a, b, i = _pair(a, b)
    rec = _Recorder("thm2.6", tol)
    ag = rec.ep("a", a)
    bg = rec.ep("b", b)
    if not rec.met:
        return rec.done()
    api = i - a @ ag
    bpi = i - b @ bg
    rec.core("ab^pi", a @ bpi, hyp=True)
    rec.core("ba^pi", b @ api, hyp=True)
    rec.zero("aba^pi=0", a @ b @ api, a, b, api, hyp=True)
    rec.zero("bab^pi=0", b @ a @ bpi, a, b, bpi, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    rec.v.witnesses.update({"a^pi": api, "b^pi": bpi, "q": a @ ag @ b @ bg})

    sc = rec.core("a+b", a + b)
    side1 = sc is not None
    if side1:
        c1 = rec.zero("a(a+b)^c a^pi", a @ sc @ api, a, sc, api)
        c2 = rec.zero("ba^pi(a+b)^c b^pi", b @ api @ sc @ bpi, b, api, sc, bpi)
        c3 = rec.zero("b(a+b)^c b^pi", b @ sc @ bpi, b, sc, bpi)
        side1 = c1 and c2 and c3
    t = a @ ag @ b + b @ bg @ a
    tc = rec.core("aa^#b+bb^#a", t)
    d1 = rec.zero("a^pi b^pi a", api @ bpi @ a, api, bpi, a)
    d2 = rec.zero("b^pi a^pi b", bpi @ api @ b, bpi, api, b)
    side2 = tc is not None and d1 and d2
    return rec.done(side1, side2)


def check_cor_2_7(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """``a a^# b = b b^# a`` core invertible (plus the EP hypotheses)
    implies ``a + b`` core invertible."""
    a, b, i = _pair(a, b)
    rec = _Recorder("cor2.7", tol, one_way=True)
    ag = rec.ep("a", a)
    bg = rec.ep("b", b)
    if not rec.met:
        return rec.done()
    api = i - a @ ag
    bpi = i - b @ bg
    rec.core("ab^pi", a @ bpi, hyp=True)
    rec.core("ba^pi", b @ api, hyp=True)
    left, right = a @ ag @ b, b @ bg @ a
    rec.equal("aa^#b=bb^#a", left, right, a, ag, b, hyp=True)
    rec.core("aa^#b", left, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    return rec.done(rec.core("a+b", a + b) is not None)


# --- sums of commuting elements ---------------------------------------------


def check_lemma_3_1(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """Double commutation implies ``a^c b = b a^c``."""
    a, b, _ = _pair(a, b)
    rec = _Recorder("lem3.1", tol, one_way=True)
    ac = rec.core("a", a, hyp=True)
    rec.core("b", b, hyp=True)
    _double_commute(rec, a, b)
    if not rec.met or hypotheses_only:
        return rec.done()
    return rec.done(rec.equal("a^c b=b a^c", ac @ b, b @ ac, ac, b))


def check_lemma_3_2(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """``ab = 0`` and ``a*b = 0`` imply ``a + b`` core invertible."""
    a, b, _ = _pair(a, b)
    rec = _Recorder("lem3.2", tol, one_way=True)
    rec.core("a", a, hyp=True)
    rec.core("b", b, hyp=True)
    rec.zero("ab=0", a @ b, a, b, hyp=True)
    rec.zero("a*b=0", a.conj().T @ b, a, b, hyp=True)
    if not rec.met or hypotheses_only:
        return rec.done()
    s = a + b
    sc = rec.core("a+b", s)
    ok = sc is not None and bool(verify_axioms(InverseKind.CORE, s, sc, tol))
    return rec.done(ok)


def check_lemma_3_3(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """Double commutation implies ``(ab)^c = a^c b^c``."""
    a, b, _ = _pair(a, b)
    rec = _Recorder("lem3.3", tol, one_way=True)
    ac = rec.core("a", a, hyp=True)
    bc = rec.core("b", b, hyp=True)
    _double_commute(rec, a, b)
    if not rec.met or hypotheses_only:
        return rec.done()
    abc = rec.core("ab", a @ b)
    ok = abc is not None and rec.equal("(ab)^c=a^c b^c", abc, ac @ bc, ac, bc)
    return rec.done(ok)


def check_thm_3_4(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """Double-commuting core invertible ``a, b``.

    side1: ``a + b`` core invertible and ``a^pi (a+b)^c a = 0``.
    side2: ``1 + a^c b`` core invertible and
    ``(1 + a^c b)^pi a (1 - a a^c) = 0``.

    ``a^pi`` is the spectral idempotent ``1 - a a^#``; the factor
    ``1 - a a^c`` is used literally where it appears.
    """
    a, b, i = _pair(a, b)
    rec = _Recorder("thm3.4", tol)
    ac = rec.core("a", a, hyp=True)
    rec.core("b", b, hyp=True)
    _double_commute(rec, a, b)
    if not rec.met or hypotheses_only:
        return rec.done()
    ag = rec.group("a", a)
    api = i - a @ ag
    rec.v.witnesses["a^pi"] = api
    rec.v.witnesses["1-aa^c"] = i - a @ ac

    sc = rec.core("a+b", a + b)
    side1 = sc is not None and rec.zero("a^pi(a+b)^c a", api @ sc @ a, api, sc, a)
    w = i + ac @ b
    wc = rec.core("1+a^c b", w)
    side2 = False
    if wc is not None:
        wg = rec.group("1+a^c b", w)
        wpi = i - w @ wg
        rec.v.witnesses["(1+a^c b)^pi"] = wpi
        side2 = rec.zero("(1+a^c b)^pi a(1-aa^c)", wpi @ a @ (i - a @ ac), wpi, a, i - a @ ac)
    return rec.done(side1, side2)


def check_cor_3_5(a, b, tol=DEFAULT_TOL, hypotheses_only=False):
    """Double-commuting EP ``a`` and core invertible ``b``:
    ``a + b`` core invertible iff ``1 + a^# b`` is."""
    a, b, i = _pair(a, b)
    rec = _Recorder("cor3.5", tol)
    ag = rec.ep("a", a)
    rec.core("b", b, hyp=True)
    _double_commute(rec, a, b)
    if not rec.met or hypotheses_only:
        return rec.done()
    side1 = rec.core("a+b", a + b) is not None
    side2 = rec.core("1+a^#b", i + ag @ b) is not None
    return rec.done(side1, side2)


CHECKERS = {
    "lem2.1": check_lemma_2_1,
    "lem2.2": check_lemma_2_2,
    "lem2.3": check_lemma_2_3,
    "thm2.4": check_thm_2_4,
    "cor2.5": check_cor_2_5,
    "thm2.6": check_thm_2_6,
    "cor2.7": check_cor_2_7,
    "lem3.1": check_lemma_3_1,
    "lem3.2": check_lemma_3_2,
    "lem3.3": check_lemma_3_3,
    "thm3.4": check_thm_3_4,
    "cor3.5": check_cor_3_5,
}

__all__ = ["TheoremVerdict", "CHECKERS", "decide_invertible"] + sorted(
    f.__name__ for f in CHECKERS.values()
)
