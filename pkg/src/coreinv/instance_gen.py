"""Seeded generators of structured matrices satisfying each result's hypotheses.

Every generator takes ``seed`` as an int or a ``numpy.random.Generator``.
Per-instance seeds come from :func:`derive_seed`, a stateless 64-bit mix of
(master seed, family id, index), so any instance can be replayed alone and
batches can be produced in any order.
"""

from dataclasses import dataclass

import numpy as np

from .block4 import BlockMatrix2x2, block_hypotheses, check_lemma_4_1
from .errors import GenerationExhausted, NotApplicable
from .gen_inverse import group_inverse, moore_penrose
from .matrix_core import DEFAULT_TOL, identity, zeros
from . import theorems as th

COND_CAP = 1e6
MASK64 = (1 << 64) - 1


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def _fnv1a64(s):
    h = 0xCBF29CE484222325
    for byte in s.encode():
        h = ((h ^ byte) * 0x100000001B3) & MASK64
    return h


def derive_seed(master, family, index):
    """Deterministic per-instance seed for (master seed, family id, index)."""
    h = _splitmix64((int(master) & MASK64) ^ _fnv1a64(family))
    return _splitmix64(h ^ _splitmix64(int(index) & MASK64))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    dim_range: tuple = (1, 8)
    rank_range: tuple = None
    count: int = 1

    def __post_init__(self):
        lo, hi = self.dim_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad dim_range {self.dim_range}")
        if self.count < 1:
            raise ValueError("count must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def draw_rank(self, rng, n):
        lo, hi = self.rank_range if self.rank_range is not None else (0, n)
        lo, hi = max(0, min(lo, n)), max(0, min(hi, n))
        return int(rng.integers(lo, hi + 1))


def _rng(seed):
    return np.random.default_rng(seed)


# --- building blocks --------------------------------------------------------


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n, rng):
    if n == 0:
        return zeros(0)
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_invertible(n, rng, cond_cap=COND_CAP):
    if n == 0:
        return zeros(0)
    while True:
        k = complex_gaussian(rng, (n, n))
        if np.linalg.cond(k) <= cond_cap:
            return k


def strictly_upper(n, rng):
    """Random nilpotent (strictly upper triangular) n x n matrix."""
    return np.triu(complex_gaussian(rng, (n, n)), 1)


def block_diag(*blocks):
    n = sum(b.shape[0] for b in blocks)
    out = zeros(n)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def _conj(u, x):
    return u @ x @ u.conj().T


def _partition(n, rng, max_parts=3):
    """Random composition of n into at most ``max_parts`` positive parts."""
    if n == 0:
        return []
    parts = int(rng.integers(1, min(n, max_parts) + 1))
    cuts = np.sort(rng.choice(np.arange(1, n), size=parts - 1, replace=False)) if parts > 1 else []
    edges = [0, *map(int, cuts), n]
    return [b - a for a, b in zip(edges, edges[1:])]


def _retry(build, accept, rng, budget=200, what="instance"):
    for _ in range(budget):
        inst = build(rng)
        if accept(inst):
            return inst
    raise GenerationExhausted(f"no acceptable {what} within {budget} attempts")


def _accept_with(check):
    def accept(inst):
        v = check(*inst, hypotheses_only=True)
        return v.hypotheses_met and not v.ambiguous
    return accept


# --- single matrices --------------------------------------------------------


def gen_core_invertible(n, r, seed):
    """``S diag(K, 0) S^-1`` with rank ``r``; core invertible by construction."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    rng = _rng(seed)
    k = random_invertible(r, rng)
    s = random_invertible(n, rng)
    if r == 0:
        return zeros(n)
    return s @ block_diag(k, zeros(n - r)) @ np.linalg.inv(s)


def gen_ep(n, r, seed):
    """``U diag(K, 0) U*`` with ``U`` unitary; EP by construction."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    rng = _rng(seed)
    k = random_invertible(r, rng)
    u = random_unitary(n, rng)
    if r == 0:
        return zeros(n)
    return _conj(u, block_diag(k, zeros(n - r)))


def gen_projection(n, k, seed):
    rng = _rng(seed)
    return _conj(random_unitary(n, rng), block_diag(identity(k), zeros(n - k)))


# --- double commuting pairs -------------------------------------------------


def double_commuting_from_diagonals(d1, d2, u=None):
    d1 = np.asarray(d1, dtype=complex)
    d2 = np.asarray(d2, dtype=complex)
    u = identity(len(d1)) if u is None else np.asarray(u, dtype=complex)
    return _conj(u, np.diag(d1)), _conj(u, np.diag(d2))


def _sparse_diagonal(n, rng):
    d = complex_gaussian(rng, n)
    d[rng.random(n) < 0.25] = 0
    return d


def gen_double_commuting_pair(n, seed):
    """Normal pair ``(U D1 U*, U D2 U*)``; diagonal entries are zero with
    probability 1/4.  This family is normal by construction."""
    rng = _rng(seed)
    u = random_unitary(n, rng)
    return double_commuting_from_diagonals(_sparse_diagonal(n, rng), _sparse_diagonal(n, rng), u)


def _matrix_block(k, rng, ep):
    """A core invertible k x k block, optionally EP, with a scalar partner."""
    kind = rng.choice(["jordan", "general", "general"]) if k >= 2 else "general"
    if kind == "jordan":
        lam = complex_gaussian(rng, ())
        s = random_invertible(k, rng)
        j = lam * identity(k) + np.diag(np.ones(k - 1), 1)
        x = s @ j @ np.linalg.inv(s)
        eigs = [lam]
    else:
        r = int(rng.integers(1, k + 1))
        x = gen_ep(k, r, rng) if ep else gen_core_invertible(k, r, rng)
        eigs = [e for e in np.linalg.eigvals(x) if abs(e) > 1e-6]
    choice = rng.random()
    if choice < 0.4 and eigs:
        c = -complex(eigs[int(rng.integers(len(eigs)))])
    elif choice < 0.6:
        c = 0.0
    else:
        c = complex(complex_gaussian(rng, ()))
    return x, c * identity(k)


def gen_double_commuting_blocks(n, seed, a_ep=False):
    """Non-normal double-commuting pair built from orthogonal blocks.

    On each block one member is a scalar multiple of the identity and the
    other is an arbitrary core invertible matrix (a Jordan block at a nonzero
    eigenvalue, or a random rank-deficient one).  Scalars are often chosen to
    cancel an eigenvalue so that ``a + b`` loses core invertibility.
    """
    rng = _rng(seed)
    a_blocks, b_blocks = [], []
    for k in _partition(n, rng):
        x, c = _matrix_block(k, rng, ep=a_ep)
        if rng.random() < 0.5:
            a_blocks.append(x)
            b_blocks.append(c)
        else:
            # b carries the matrix; a must stay EP, and a scalar block is EP
            y, c2 = _matrix_block(k, rng, ep=False)
            a_blocks.append(c2)
            b_blocks.append(y)
    w = random_unitary(n, rng)
    return _conj(w, block_diag(*a_blocks)), _conj(w, block_diag(*b_blocks))


def gen_double_commuting_any(n, seed, a_ep=False):
    """Mix of the normal and block families, rejection-sampled so that the
    double-commuting hypotheses verify decisively."""
    check = _accept_with(th.check_cor_3_5 if a_ep else th.check_thm_3_4)

    def build(rng):
        if rng.random() < 0.3:
            return gen_double_commuting_pair(n, rng)
        return gen_double_commuting_blocks(n, rng, a_ep=a_ep)

    return _retry(build, check, _rng(seed), what="double-commuting pair")


# --- triangular and EP pair families ---------------------------------------


def gen_thm_2_4_instance(n, seed):
    """``a = U diag(K, 0) U*`` and ``b = U [[b1, 0], [b3, b4]] U*``.

    ``b1`` sometimes cancels ``K`` up to a nilpotent part and ``b4`` is often
    singular, so both sides of the equivalence take both truth values.
    """
    check = _accept_with(th.check_thm_2_4)

    def build(rng):
        r = int(rng.integers(0, n + 1))
        s = n - r
        k = random_invertible(r, rng)
        u = random_unitary(n, rng)
        mode = rng.choice(["random", "cancel", "cancel", "negate"])
        if mode == "random" or r == 0:
            b1 = complex_gaussian(rng, (r, r))
        elif mode == "cancel" and r >= 2:
            b1 = -k + strictly_upper(r, rng)
        else:
            b1 = -k
        b4 = gen_core_invertible(s, int(rng.integers(0, s + 1)), rng)
        b3 = complex_gaussian(rng, (s, r))
        if rng.random() < 0.3:
            b3 = b4 @ complex_gaussian(rng, (s, r))
        b = np.block([[b1, zeros(r, s)], [b3, b4]])
        return _conj(u, block_diag(k, zeros(s))), _conj(u, b)

    return _retry(build, check, _rng(seed), what="thm2.4 instance")


def _ep_pair_block(k, rng, cancel):
    """One diagonal block of an EP pair satisfying the two-sided hypotheses."""
    kinds = ["inv", "tri", "tri-swap", "a-only", "b-only"] if not cancel else ["inv", "tri", "tri-swap"]
    if k < 2:
        kinds = [t for t in kinds if not t.startswith("tri")]
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "inv":
        a = random_invertible(k, rng)
        # with k = 1 the cancellation leaves a + b = 0, which is still core invertible
        b = strictly_upper(k, rng) - a if cancel else random_invertible(k, rng)
        return a, b
    if kind in ("a-only", "b-only"):
        x = gen_ep(k, int(rng.integers(0, k + 1)), rng)
        return (x, zeros(k)) if kind == "a-only" else (zeros(k), x)
    r = int(rng.integers(1, k))
    s = k - r
    kk = random_invertible(r, rng)
    x = -kk + strictly_upper(r, rng) if cancel else random_invertible(r, rng)
    z = random_invertible(s, rng)
    y = complex_gaussian(rng, (s, r))
    v = random_unitary(k, rng)
    first = _conj(v, block_diag(kk, zeros(s)))
    second = _conj(v, np.block([[x, zeros(r, s)], [y, z]]))
    return (first, second) if kind == "tri" else (second, first)


def gen_thm_2_6_instance(n, seed):
    """Pair of EP matrices assembled block-diagonally in a unitary frame.

    Roughly half the instances contain a block on which ``a + b`` is
    nilpotent-like, making both sides of the equivalence false.
    """
    check = _accept_with(th.check_thm_2_6)

    def build(rng):
        parts = _partition(n, rng)
        cancel_at = int(rng.integers(len(parts))) if rng.random() < 0.5 else -1
        pairs = [_ep_pair_block(k, rng, i == cancel_at) for i, k in enumerate(parts)]
        w = random_unitary(n, rng)
        return _conj(w, block_diag(*[p[0] for p in pairs])), _conj(w, block_diag(*[p[1] for p in pairs]))

    return _retry(build, check, _rng(seed), what="thm2.6 instance")


def gen_cor_2_7_instance(n, seed):
    """``a = W diag(C, A2, 0, 0) W*``, ``b = W diag(C, 0, B3, 0) W*``."""
    check = _accept_with(th.check_cor_2_7)

    def build(rng):
        sizes = rng.multinomial(n, [0.35, 0.25, 0.25, 0.15])
        c, a2, b3 = (random_invertible(int(k), rng) for k in sizes[:3])
        z = zeros(int(sizes[3]))
        w = random_unitary(n, rng)
        a = block_diag(c, a2, zeros(int(sizes[2])), z)
        b = block_diag(c, zeros(int(sizes[1])), b3, z)
        return _conj(w, a), _conj(w, b)

    return _retry(build, check, _rng(seed), what="cor2.7 instance")


def gen_lemma_2_1_instance(n, seed):
    """Oblique idempotent ``p`` and ``a`` lower triangular relative to it."""
    check = _accept_with(th.check_lemma_2_1)

    def build(rng):
        k = int(rng.integers(0, n + 1))
        s = random_invertible(n, rng)
        s_inv = np.linalg.inv(s)
        a1 = gen_core_invertible(k, int(rng.integers(0, k + 1)), rng)
        a4 = gen_core_invertible(n - k, int(rng.integers(0, n - k + 1)), rng)
        a3 = complex_gaussian(rng, (n - k, k))
        if rng.random() < 0.5:
            a3 = a4 @ a3
        p = s @ block_diag(identity(k), zeros(n - k)) @ s_inv
        a = s @ np.block([[a1, zeros(k, n - k)], [a3, a4]]) @ s_inv
        return p, a

    return _retry(build, check, _rng(seed), what="lem2.1 instance")


def gen_lemma_2_2_instance(n, seed):
    rng = _rng(seed)
    a = gen_core_invertible(n, int(rng.integers(0, n + 1)), rng)
    w = complex_gaussian(rng, (n, n))
    mode = rng.choice(["range", "random", "cokernel", "zero"])
    if mode == "range":
        b = a @ w
    elif mode == "cokernel":
        b = (identity(n) - a @ moore_penrose(a)) @ w
    elif mode == "zero":
        b = zeros(n)
    else:
        b = w
    return a, b


def gen_lemma_2_3_instance(n, seed):
    """Projection ``p`` and ``a`` with ``pa(1-p) = 0`` and
    ``(a(1-p))^pi (1-p) a p = 0``."""
    check = _accept_with(th.check_lemma_2_3)

    def build(rng):
        k = int(rng.integers(0, n + 1))
        u = random_unitary(n, rng)
        a1 = gen_core_invertible(k, int(rng.integers(0, k + 1)), rng)
        a4 = gen_core_invertible(n - k, int(rng.integers(0, n - k + 1)), rng)
        a3 = complex_gaussian(rng, (n - k, k))
        if n - k:
            a3 = a4 @ group_inverse(a4) @ a3
        p = _conj(u, block_diag(identity(k), zeros(n - k)))
        a = _conj(u, np.block([[a1, zeros(k, n - k)], [a3, a4]]))
        return p, a

    return _retry(build, check, _rng(seed), what="lem2.3 instance")


# --- orthogonal pair families ----------------------------------------------


def gen_orthogonal_pair(n, seed):
    """``a = W diag(K, 0) W*``, ``b = W diag(0, L) W*`` with core invertible,
    generally non-normal ``K`` and ``L``."""
    if n < 2:
        raise ValueError("gen_orthogonal_pair needs n >= 2")
    rng = _rng(seed)
    r = int(rng.integers(0, n + 1))
    kk = gen_core_invertible(r, int(rng.integers(0, r + 1)), rng)
    ll = gen_core_invertible(n - r, int(rng.integers(0, n - r + 1)), rng)
    w = random_unitary(n, rng)
    return _conj(w, block_diag(kk, zeros(n - r))), _conj(w, block_diag(zeros(r), ll))


# --- block matrix families -------------------------------------------------


def _antidiag_pair(n, rng):
    mode = rng.choice(["oblique", "oblique", "swap", "invertible"])
    if mode == "invertible":
        return random_invertible(n, rng), random_invertible(n, rng)
    if mode == "swap":
        b = gen_core_invertible(n, int(rng.integers(0, n + 1)), rng)
        return b, b.conj().T
    r = int(rng.integers(0, n + 1))
    x = random_invertible(n, rng)
    y = random_invertible(n, rng)
    b1 = block_diag(random_invertible(r, rng), zeros(n - r))
    c1 = block_diag(random_invertible(r, rng), zeros(n - r))
    return x @ b1 @ np.linalg.inv(y), y @ c1 @ np.linalg.inv(x)


def gen_antidiag_pair(n, seed):
    """``(B, C)`` with ``B (CB)^pi = 0`` and ``C (BC)^pi = 0``."""
    return _retry(lambda rng: _antidiag_pair(n, rng), _accept_with(check_lemma_4_1), _rng(seed),
                  what="lem4.1 pair")


def _block4_candidate(n, rng):
    family = rng.choice(["zero-offdiag", "diagonal", "mixed", "mixed"])
    z = zeros(n)
    if family == "zero-offdiag":
        a = gen_core_invertible(n, int(rng.integers(0, n + 1)), rng)
        d = gen_core_invertible(n, int(rng.integers(0, n + 1)), rng)
        return BlockMatrix2x2(a, z, z, d)
    u = random_unitary(n, rng)
    if family == "diagonal":
        # per coordinate: (alpha, alpha, 0, 0) or (0, 0, beta, gamma)
        al, be, ga = (complex_gaussian(rng, n) for _ in range(3))
        off = rng.random(n) < 0.5
        al[off] = 0
        be[~off] = 0
        ga[~off] = 0
        al[rng.random(n) < 0.2] = 0
        if rng.random() < 0.5:
            ga = be.conj()  # swap-symmetric: C = B*
        a = _conj(u, np.diag(al))
        return BlockMatrix2x2(a, _conj(u, np.diag(be)), _conj(u, np.diag(ga)), a)
    # mixed: diagonal part on one subspace, anti-diagonal part on the other
    k = int(rng.integers(0, n + 1))
    a1 = gen_core_invertible(k, int(rng.integers(0, k + 1)), rng)
    d1 = gen_core_invertible(k, int(rng.integers(0, k + 1)), rng)
    b2, c2 = _antidiag_pair(n - k, rng) if n - k else (zeros(0), zeros(0))
    zk, zr = zeros(k), zeros(n - k)
    return BlockMatrix2x2(
        _conj(u, block_diag(a1, zr)),
        _conj(u, block_diag(zk, b2)),
        _conj(u, block_diag(zk, c2)),
        _conj(u, block_diag(d1, zr)),
    )


def gen_block4_instance(n, seed, variant="4.2", budget=200):
    """Block matrix satisfying the hypotheses of the block theorem ``variant``.

    Under those hypotheses ``A^c B D^c C`` is always zero: ``BC``
    double-commutes with ``A`` so it commutes with ``A^c``, and a nilpotent
    product of commuting group invertible matrices vanishes.  The search
    therefore covers only families where that product is zero.
    """

    def accept(blocks):
        v = block_hypotheses(blocks, DEFAULT_TOL, variant)
        return v.hypotheses_met and not v.ambiguous

    return _retry(lambda rng: _block4_candidate(n, rng), accept, _rng(seed), budget,
                  what=f"thm{variant} block instance")


# --- near misses ------------------------------------------------------------


def _embed(x, n, rng):
    k = x.shape[0]
    w = random_unitary(n, rng)
    return _conj(w, block_diag(np.asarray(x, dtype=complex), zeros(n - k)))


def gen_near_miss(base, which_hypothesis, seed, n=4):
    """Instance of family ``base`` violating only ``which_hypothesis``.

    Supported pairs::

        thm2.4  aba^pi=0   upper-right block added to b
        thm2.4  ep(a)      a = [[1, 1], [0, 0]] (+) 0, b = lambda I
        thm3.4  a*b=ba*    b = a with a non-normal and invertible
        lem3.2  a*b=0      ab = 0 but a*b != 0
        lem4.1  B(CB)^pi=0 C = 0, B != 0
        thm4.2  B(CB)^pi=0 A = D = 0, C = 0, B != 0
    """
    rng = _rng(seed)
    key = (base, which_hypothesis)
    if key == ("thm2.4", "aba^pi=0"):
        if n < 2:
            raise NotApplicable("needs n >= 2")
        r = int(rng.integers(1, n))
        s = n - r
        u = random_unitary(n, rng)
        k = random_invertible(r, rng)
        b = np.block([[random_invertible(r, rng), complex_gaussian(rng, (r, s))],
                      [complex_gaussian(rng, (s, r)), random_invertible(s, rng)]])
        return _conj(u, block_diag(k, zeros(s))), _conj(u, b)
    if key == ("thm2.4", "ep(a)"):
        if n < 2:
            raise NotApplicable("needs n >= 2")
        a = _embed(np.array([[1, 1], [0, 0]]), n, rng)
        return a, complex(complex_gaussian(rng, ())) * identity(n)
    if key == ("thm3.4", "a*b=ba*"):
        if n < 2:
            raise NotApplicable("a non-normal matrix needs n >= 2")
        s = random_invertible(n, rng)
        a = s @ np.diag(complex_gaussian(rng, n)) @ np.linalg.inv(s)
        return a, a.copy()
    if key == ("lem3.2", "a*b=0"):
        if n < 2:
            raise NotApplicable("needs n >= 2")
        x, y = complex_gaussian(rng, 2)
        while abs(x - y) < 1e-3:
            x, y = complex_gaussian(rng, 2)
        a = np.array([[1, 1], [0, 0]], dtype=complex)
        b = np.outer([1, -1], [x, y])
        w = random_unitary(n, rng)
        return _conj(w, block_diag(a, zeros(n - 2))), _conj(w, block_diag(b, zeros(n - 2)))
    if key in (("lem4.1", "B(CB)^pi=0"), ("thm4.2", "B(CB)^pi=0")):
        b = gen_core_invertible(n, int(rng.integers(1, n + 1)), rng)
        if base == "lem4.1":
            return b, zeros(n)
        z = zeros(n)
        return BlockMatrix2x2(z, b, z, z)
    raise NotApplicable(f"no near-miss construction for {base}/{which_hypothesis}")


NEAR_MISSES = (
    ("thm2.4", "aba^pi=0"),
    ("thm2.4", "ep(a)"),
    ("thm3.4", "a*b=ba*"),
    ("lem3.2", "a*b=0"),
    ("lem4.1", "B(CB)^pi=0"),
    ("thm4.2", "B(CB)^pi=0"),
)
