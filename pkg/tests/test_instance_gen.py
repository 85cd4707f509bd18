import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coreinv import instance_gen as ig
from coreinv.block4 import BlockMatrix2x2, block_hypotheses, check_lemma_4_1, check_thm_4_2
from coreinv.errors import GenerationExhausted, NotApplicable
from coreinv.gen_inverse import core_inverse, is_ep, is_group_invertible, spectral_idempotent
from coreinv.matrix_core import rank
from coreinv.suites import SUITES
from coreinv.theorems import check_lemma_3_2, check_thm_2_4, check_thm_3_4

seeds = st.integers(0, 2**64 - 1)


def is_normal(m, tol=1e-8):
    return np.linalg.norm(m @ m.conj().T - m.conj().T @ m) <= tol * (1 + np.linalg.norm(m) ** 2)


# --- seeds and config ---------------------------------------------------------------


def test_derive_seed_is_deterministic_and_spread():
    s = {ig.derive_seed(1, "thm2.4", i) for i in range(1000)}
    assert len(s) == 1000
    assert ig.derive_seed(1, "thm2.4", 5) == ig.derive_seed(1, "thm2.4", 5)
    assert ig.derive_seed(1, "thm2.4", 5) != ig.derive_seed(1, "thm3.4", 5)
    assert ig.derive_seed(1, "thm2.4", 5) != ig.derive_seed(2, "thm2.4", 5)
    assert all(0 <= x < 2**64 for x in s)


def test_gen_config_validation():
    cfg = ig.GenConfig(seed=3, dim_range=(2, 4), rank_range=(1, 9))
    rng = np.random.default_rng(0)
    assert {cfg.draw_rank(rng, 3) for _ in range(200)} == {1, 2, 3}
    with pytest.raises(ValueError):
        ig.GenConfig(dim_range=(0, 3))
    with pytest.raises(ValueError):
        ig.GenConfig(count=0)
    with pytest.raises(ValueError):
        ig.GenConfig(seed=-1)


@pytest.mark.parametrize("sid", sorted(SUITES))
def test_generators_are_bit_exact_replays(sid):
    suite = SUITES[sid]
    n = max(3, suite.min_dim)
    first = suite.generate(n, 12345)
    second = suite.generate(n, 12345)
    for x, y in zip(first, second):
        if hasattr(x, "assemble"):
            x, y = x.assemble(), y.assemble()
        np.testing.assert_array_equal(x, y)


# --- single-matrix generators ---------------------------------------------------------------


def test_gen_core_invertible_examples():
    np.testing.assert_array_equal(ig.gen_core_invertible(3, 0, 9), np.zeros((3, 3)))
    a = ig.gen_core_invertible(2, 2, 9)
    np.testing.assert_allclose(core_inverse(a), np.linalg.inv(a), atol=1e-10)
    a = ig.gen_core_invertible(4, 2, 9)
    assert is_group_invertible(a)
    assert rank(spectral_idempotent(a)) == 2
    with pytest.raises(ValueError):
        ig.gen_core_invertible(2, 3, 0)


def test_gen_ep_examples():
    a = ig.gen_ep(2, 2, 1)
    assert rank(a) == 2 and is_ep(a)
    a = ig.gen_ep(3, 1, 1)
    assert is_ep(a) and rank(a) == 1
    np.testing.assert_array_equal(ig.gen_ep(2, 0, 1), np.zeros((2, 2)))


@given(st.integers(1, 8), st.data(), seeds)
def test_single_generators_hit_requested_rank(n, data, seed):
    r = data.draw(st.integers(0, n))
    a = ig.gen_core_invertible(n, r, seed)
    assert rank(a) == r == rank(a @ a)
    e = ig.gen_ep(n, r, seed)
    assert rank(e) == r and is_ep(e)


def test_ranks_cover_full_range():
    ranks = {rank(ig.gen_core_invertible(6, ig.GenConfig().draw_rank(np.random.default_rng(s), 6), s))
             for s in range(200)}
    assert ranks == set(range(7))


# --- pair generators -------------------------------------------------------------------------


def test_double_commuting_from_diagonals_examples():
    a, b = ig.double_commuting_from_diagonals([1, 0], [1, 2])
    v = check_thm_3_4(a, b)
    assert v.hypotheses_met and max(v.hypothesis_residuals.values(), default=0) == 0
    a, b = ig.double_commuting_from_diagonals([1, 2], [0, 0])
    assert not b.any()
    a, b = ig.double_commuting_from_diagonals([1, 2j], [1, 2j])
    np.testing.assert_array_equal(a, b)


@given(st.integers(1, 8), seeds)
def test_normal_double_commuting_family(n, seed):
    a, b = ig.gen_double_commuting_pair(n, seed)
    assert is_normal(a) and is_normal(b)
    assert check_thm_3_4(a, b, hypotheses_only=True).hypotheses_met


def test_block_family_produces_non_normal_pairs():
    count = 0
    for s in range(60):
        a, b = ig.gen_double_commuting_blocks(4, s)
        assert check_thm_3_4(a, b, hypotheses_only=True).hypotheses_met
        count += not (is_normal(a) and is_normal(b))
    assert count > 20


def test_thm_2_4_family_contains_worked_example():
    a = np.diag([2.0, 0.0])
    b = np.array([[0, 0], [1, 3.0]])
    assert check_thm_2_4(a, b, hypotheses_only=True).hypotheses_met


@given(st.integers(1, 8), seeds)
def test_thm_2_4_family_structure(n, seed):
    a, b = ig.gen_thm_2_4_instance(n, seed)
    assert is_ep(a) and is_group_invertible(b)
    v = check_thm_2_4(a, b, hypotheses_only=True)
    assert v.hypotheses_met and not v.ambiguous


def test_orthogonal_pair_examples():
    assert check_lemma_3_2(np.diag([1, 0]), np.diag([0, 1j])).passed
    with pytest.raises(ValueError):
        ig.gen_orthogonal_pair(1, 0)
    non_normal = 0
    for s in range(40):
        a, b = ig.gen_orthogonal_pair(4, s)
        assert np.linalg.norm(a @ b) < 1e-10 and np.linalg.norm(a.conj().T @ b) < 1e-10
        non_normal += not is_normal(a) or not is_normal(b)
    assert non_normal > 10


def test_block4_examples_and_budget():
    one = lambda x: np.array([[x]], dtype=complex)  # noqa: E731
    assert block_hypotheses(BlockMatrix2x2(one(2), one(0), one(0), one(2))).hypotheses_met
    assert block_hypotheses(BlockMatrix2x2(one(0), one(1), one(1), one(0))).hypotheses_met
    with pytest.raises(GenerationExhausted):
        ig.gen_block4_instance(2, 0, budget=0)


# --- soundness ---------------------------------------------------------------------------


@pytest.mark.parametrize("sid", sorted(SUITES))
def test_every_emitted_instance_meets_its_hypotheses(sid):
    suite = SUITES[sid]
    for i in range(40):
        seed = ig.derive_seed(99, sid, i)
        n = max(suite.min_dim, 1 + i % 8)
        v = suite.check(*suite.generate(n, seed), hypotheses_only=True)
        assert v.hypotheses_met, (sid, i, v.hypotheses)


# --- near misses -------------------------------------------------------------------------


def _near_miss_verdict(base, inst):
    if base == "thm2.4":
        return check_thm_2_4(*inst)
    if base == "thm3.4":
        return check_thm_3_4(*inst)
    if base == "lem3.2":
        return check_lemma_3_2(*inst)
    if base == "lem4.1":
        return check_lemma_4_1(*inst)
    return check_thm_4_2(inst)


@pytest.mark.parametrize("base, which", ig.NEAR_MISSES)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_near_miss_breaks_exactly_one_hypothesis(base, which, seed):
    v = _near_miss_verdict(base, ig.gen_near_miss(base, which, seed))
    failed = [k for k, ok in v.hypotheses.items() if not ok]
    assert failed == [which], v.hypotheses
    assert v.status == "not_met"


def test_near_miss_not_applicable():
    with pytest.raises(NotApplicable):
        ig.gen_near_miss("thm2.4", "no-such-hypothesis", 0)
    with pytest.raises(NotApplicable):
        ig.gen_near_miss("thm3.4", "a*b=ba*", 0, n=1)


def test_near_miss_ep_replacement_is_not_ep():
    a, _ = ig.gen_near_miss("thm2.4", "ep(a)", 4)
    assert not is_ep(a) and is_group_invertible(a)
