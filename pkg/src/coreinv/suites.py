"""Batch evaluation of the checkers on generated instances.

Each suite pairs a generator with a checker.  Instance ``i`` of a suite run
with master seed ``s`` is drawn from ``derive_seed(s, suite, i)`` so results
do not depend on evaluation order.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import instance_gen as ig
from .block4 import check_lemma_4_1, check_thm_4_2, check_thm_4_4
from .matrix_core import Tolerance
from .theorems import CHECKERS

STATUSES = ("pass", "fail", "not_met", "ambiguous")


@dataclass(frozen=True)
class Suite:
    suite_id: str
    generate: object  # (n, seed) -> tuple of checker arguments
    check: object
    min_dim: int = 1


def _pair(gen):
    return lambda n, seed: gen(n, seed)


def _single(gen):
    return lambda n, seed: (gen(n, seed),)


SUITES = {
    s.suite_id: s
    for s in (
        Suite("thm2.4", _pair(ig.gen_thm_2_4_instance), CHECKERS["thm2.4"]),
        Suite("cor2.5", lambda n, s: ig.gen_double_commuting_any(n, s, a_ep=True), CHECKERS["cor2.5"]),
        Suite("thm2.6", _pair(ig.gen_thm_2_6_instance), CHECKERS["thm2.6"]),
        Suite("cor2.7", _pair(ig.gen_cor_2_7_instance), CHECKERS["cor2.7"]),
        Suite("lem3.1", _pair(ig.gen_double_commuting_any), CHECKERS["lem3.1"]),
        Suite("lem3.2", _pair(ig.gen_orthogonal_pair), CHECKERS["lem3.2"], min_dim=2),
        Suite("lem3.3", _pair(ig.gen_double_commuting_any), CHECKERS["lem3.3"]),
        Suite("thm3.4", _pair(ig.gen_double_commuting_any), CHECKERS["thm3.4"]),
        Suite("cor3.5", lambda n, s: ig.gen_double_commuting_any(n, s, a_ep=True), CHECKERS["cor3.5"]),
        Suite("lem2.1", _pair(ig.gen_lemma_2_1_instance), CHECKERS["lem2.1"]),
        Suite("lem2.2", _pair(ig.gen_lemma_2_2_instance), CHECKERS["lem2.2"]),
        Suite("lem2.3", _pair(ig.gen_lemma_2_3_instance), CHECKERS["lem2.3"]),
        Suite("lem4.1", _pair(ig.gen_antidiag_pair), check_lemma_4_1),
        Suite("thm4.2", _single(lambda n, s: ig.gen_block4_instance(n, s, "4.2")), check_thm_4_2),
        Suite("thm4.4", _single(lambda n, s: ig.gen_block4_instance(n, s, "4.4")), check_thm_4_4),
    )
}

SUITE_IDS = tuple(SUITES)


def _round(x, digits=6):
    """Residuals printed with a fixed number of significant digits."""
    return float(f"{x:.{digits}e}")


def instance_dim(seed, dims, min_dim=1):
    lo, hi = max(dims[0], min_dim), max(dims[1], min_dim)
    return int(np.random.default_rng(seed).integers(lo, hi + 1))


def run_instance(suite, index, master_seed, dims, tol):
    seed = ig.derive_seed(master_seed, suite.suite_id, index)
    n = instance_dim(seed, dims, suite.min_dim)
    args = suite.generate(n, seed)
    verdict = suite.check(*args, tol=tol)
    return {
        "suite": suite.suite_id,
        "index": index,
        "seed": seed,
        "n": n,
        "hypotheses": dict(sorted(verdict.hypotheses.items())),
        "side1": verdict.side1,
        "side2": verdict.side2,
        "status": verdict.status,
        "pass": verdict.passed,
        "max_residual": _round(verdict.max_residual),
    }, verdict


def aggregate(results):
    counts = dict.fromkeys(STATUSES, 0)
    for r in results:
        counts[r["status"]] += 1
    return counts


def run_suite(suite_id, instances, seed=0, dims=(1, 8), tol=None, keep_verdicts=False):
    """Run one suite (or ``"all"``) and return a JSON-ready report dict.

    With ``keep_verdicts`` the full :class:`TheoremVerdict` objects are
    returned as a second value.
    """
    if instances < 1:
        raise ValueError("instances must be positive")
    tol = tol or Tolerance()
    ids = SUITE_IDS if suite_id == "all" else (suite_id,)
    if any(i not in SUITES for i in ids):
        raise KeyError(f"unknown suite {suite_id!r}")
    start = time.perf_counter()
    results, verdicts = [], []
    for sid in ids:
        for index in range(instances):
            row, verdict = run_instance(SUITES[sid], index, seed, dims, tol)
            results.append(row)
            verdicts.append(verdict)
    report = {
        "suite": suite_id,
        "seed": seed,
        "dims": list(dims),
        "instances": instances,
        "rtol": tol.rtol,
        "atol": tol.atol,
        "results": results,
        "aggregate": aggregate(results),
        "duration_ms": round((time.perf_counter() - start) * 1000.0, 3),
    }
    if suite_id == "all":
        report["by_suite"] = {sid: aggregate([r for r in results if r["suite"] == sid]) for sid in ids}
    return (report, verdicts) if keep_verdicts else report


def truth_table(results):
    """Counts of observed (side1, side2) combinations among met instances."""
    table = {}
    for r in results:
        if r["status"] in ("pass", "fail"):
            key = f"{r['side1']}/{r['side2']}"
            table[key] = table.get(key, 0) + 1
    return dict(sorted(table.items()))
