"""Command-line front end.

Usage::

    coreinv inv {mp,group,drazin,core,core-proj} FILE [-o OUT]
    coreinv check {ep,projection,core-invertible,nilpotent} FILE
    coreinv suite SUITE [--instances N] [--seed S] [--dims LO..HI] [--rtol R] [--atol A] [--report PATH]
    coreinv gen FAMILY [--count N] [--seed S] [--dims LO..HI] --out DIR
    coreinv block {thm4.2,thm4.4,lem4.1,permuted} FILE... [--split N]

Exit codes: 0 success or true, 1 false or a failing instance, 2 usage or
parse error, 3 the requested inverse does not exist.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import instance_gen as ig
from .block4 import BlockMatrix2x2, check_lemma_4_1, check_thm_4_2, check_thm_4_4, is_nilpotent, permuted_variant
from .errors import CoreInvError, NotGroupInvertible
from .gen_inverse import (
    core_inverse,
    core_inverse_via_projection,
    drazin_inverse,
    group_inverse,
    is_ep,
    moore_penrose,
)
from .matrix_core import Tolerance, fro, format_matrix_text, matrix_to_json, rank, read_matrix, write_matrix
from .suites import SUITE_IDS, SUITES, instance_dim, run_suite

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_NO_INVERSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dims(text):
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"need 1 <= LO <= HI, got {text!r}")
    return lo, hi


def _tol(args):
    try:
        return Tolerance(atol=args.atol, rtol=args.rtol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(path):
    try:
        return read_matrix(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit_matrix(x, out, like):
    if out:
        write_matrix(out, x)
    elif str(like).endswith(".json"):
        print(json.dumps(matrix_to_json(x)))
    else:
        sys.stdout.write(format_matrix_text(x))


# --- inv --------------------------------------------------------------------

_INVERSES = {
    "mp": moore_penrose,
    "group": group_inverse,
    "drazin": lambda a, tol: drazin_inverse(a, tol)[0],
    "core": core_inverse,
    "core-proj": core_inverse_via_projection,
}


def cmd_inv(args):
    a = _load(args.file)
    tol = _tol(args)
    if args.kind != "mp" and a.shape[0] != a.shape[1]:
        raise UsageError(f"{args.kind} inverse needs a square matrix, got {a.shape}")
    try:
        x = _INVERSES[args.kind](a, tol)
    except NotGroupInvertible:
        ra = rank(a, tol)
        print(f"rank(A)={ra}, rank(A^2)={rank(a @ a, tol)}: not {args.kind.split('-')[0]} invertible",
              file=sys.stderr)
        return EXIT_NO_INVERSE
    _emit_matrix(x, args.output, args.file)
    return EXIT_OK


# --- check ------------------------------------------------------------------


def cmd_check(args):
    a = _load(args.file)
    tol = _tol(args)
    if a.shape[0] != a.shape[1]:
        raise UsageError(f"predicate needs a square matrix, got {a.shape}")
    n = a.shape[0]
    ra, ra2 = rank(a, tol), rank(a @ a, tol)
    if args.predicate == "ep":
        ok = is_ep(a, tol)
        detail = {"rank(A)": ra, "rank(A^2)": ra2, "rank([A A*])": rank(np.hstack([a, a.conj().T]), tol)}
    elif args.predicate == "projection":
        scale = 1.0 + fro(a) ** 2
        r1 = fro(a @ a - a) / scale
        r2 = fro(a.conj().T - a) / (1.0 + fro(a))
        ok = r1 <= tol.residual_bound and r2 <= tol.residual_bound
        detail = {"P^2=P": r1, "P*=P": r2}
    elif args.predicate == "core-invertible":
        ok = ra == ra2
        detail = {"rank(A)": ra, "rank(A^2)": ra2}
    else:
        ok = is_nilpotent(a, tol)
        nx = fro(a)
        detail = {"||A^n||/||A||^n": fro(np.linalg.matrix_power(a / nx, n)) if nx else 0.0}
    print("true" if ok else "false")
    for k, v in detail.items():
        print(f"  {k} = {v:.3e}" if isinstance(v, float) else f"  {k} = {v}")
    return EXIT_OK if ok else EXIT_FALSE


# --- suite ------------------------------------------------------------------


def report_bytes(report):
    return (json.dumps(report, sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode("utf-8")


def cmd_suite(args):
    if args.instances < 1:
        raise UsageError("--instances must be at least 1")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    report = run_suite(args.suite, args.instances, args.seed, args.dims, _tol(args))
    data = report_bytes(report)
    if args.report:
        with open(args.report, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    agg = report["aggregate"]
    print(
        f"{args.suite}: pass={agg['pass']} fail={agg['fail']} not_met={agg['not_met']} "
        f"ambiguous={agg['ambiguous']} ({report['duration_ms']:.0f} ms)",
        file=sys.stderr,
    )
    return EXIT_OK if agg["fail"] == 0 else EXIT_FALSE


# --- gen --------------------------------------------------------------------

_GEN_SINGLE = {
    "core-invertible": lambda n, rng: ig.gen_core_invertible(n, int(rng.integers(0, n + 1)), rng),
    "ep": lambda n, rng: ig.gen_ep(n, int(rng.integers(0, n + 1)), rng),
}
GEN_FAMILIES = tuple(_GEN_SINGLE) + SUITE_IDS


def _matrix_names(family, count):
    if family in ("thm4.2", "thm4.4"):
        return ("A", "B", "C", "D")
    if family == "lem4.1":
        return ("B", "C")
    if family in ("lem2.1", "lem2.3"):
        return ("p", "a")
    return ("a", "b")[:count]


def cmd_gen(args):
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    os.makedirs(args.out, exist_ok=True)
    entries = []
    for index in range(args.count):
        seed = ig.derive_seed(args.seed, args.family, index)
        if args.family in _GEN_SINGLE:
            rng = np.random.default_rng(seed)
            n = int(rng.integers(args.dims[0], args.dims[1] + 1))
            mats = (_GEN_SINGLE[args.family](n, rng),)
            hyp = {"rank(A)": rank(mats[0]), "rank(A^2)": rank(mats[0] @ mats[0])}
        else:
            suite = SUITES[args.family]
            n = instance_dim(seed, args.dims, suite.min_dim)
            inst = suite.generate(n, seed)
            verdict = suite.check(*inst, hypotheses_only=True)
            hyp = dict(sorted(verdict.hypothesis_residuals.items()))
            mats = (inst[0].A, inst[0].B, inst[0].C, inst[0].D) if isinstance(inst[0], BlockMatrix2x2) else inst
        files = {}
        for name, m in zip(_matrix_names(args.family, len(mats)), mats):
            fname = f"{args.family}_{index:04d}_{name}.mat"
            write_matrix(os.path.join(args.out, fname), m)
            files[name] = fname
        entries.append({"family": args.family, "index": index, "seed": seed, "n": n, "files": files,
                        "hypothesis_residuals": hyp})
    manifest = {"family": args.family, "seed": args.seed, "dims": list(args.dims), "count": args.count,
                "instances": entries}
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(f"wrote {args.count} {args.family} instances to {args.out}", file=sys.stderr)
    return EXIT_OK


# --- block ------------------------------------------------------------------


def _blocks_from_files(files, split):
    mats = [_load(f) for f in files]
    if len(mats) == 1:
        try:
            return BlockMatrix2x2.split(mats[0], split)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if len(mats) != 4:
        raise UsageError("give four block files A B C D, or one 2n x 2n file with --split n")
    try:
        return BlockMatrix2x2(*mats)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_block(args):
    tol = _tol(args)
    if args.theorem == "lem4.1":
        if len(args.files) == 2:
            b, c = (_load(f) for f in args.files)
        else:
            blocks = _blocks_from_files(args.files, args.split)
            b, c = blocks.B, blocks.C
        if b.shape != c.shape or b.shape[0] != b.shape[1]:
            raise UsageError("B and C must be square and of the same size")
        verdict = check_lemma_4_1(b, c, tol)
    else:
        blocks = _blocks_from_files(args.files, args.split)
        if args.theorem == "thm4.2":
            verdict = check_thm_4_2(blocks, tol)
        elif args.theorem == "thm4.4":
            verdict = check_thm_4_4(blocks, tol)
        else:
            verdict = permuted_variant(blocks, tol, args.variant)
    out = verdict.to_json()
    out["hypothesis_residuals"] = dict(sorted(verdict.hypothesis_residuals.items()))
    out["flags"] = dict(sorted(verdict.flags.items()))
    print(json.dumps(out, sort_keys=True, indent=1))
    return EXIT_OK if verdict.passed else EXIT_FALSE


# --- parser -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _tolerance_flags(p):
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-12)


def build_parser():
    parser = _Parser(prog="coreinv", description="Core, group, Drazin and Moore-Penrose inverses; "
                                                  "executable checks of core-inverse results.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("inv", help="compute a generalized inverse")
    p.add_argument("kind", choices=sorted(_INVERSES))
    p.add_argument("file")
    p.add_argument("-o", "--output")
    _tolerance_flags(p)
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("check", help="test a matrix predicate")
    p.add_argument("predicate", choices=["ep", "projection", "core-invertible", "nilpotent"])
    p.add_argument("file")
    _tolerance_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", help="run a generated-instance suite")
    p.add_argument("suite", choices=[*SUITE_IDS, "all"])
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=_dims, default=(1, 8))
    p.add_argument("--report")
    _tolerance_flags(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("gen", help="write generated instances and a manifest")
    p.add_argument("family", choices=GEN_FAMILIES)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=_dims, default=(1, 8))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("block", help="check a block-matrix result on given blocks")
    p.add_argument("theorem", choices=["thm4.2", "thm4.4", "lem4.1", "permuted"])
    p.add_argument("files", nargs="+")
    p.add_argument("--split", type=int)
    p.add_argument("--variant", choices=["4.2", "4.4"], default="4.2")
    _tolerance_flags(p)
    p.set_defaults(func=cmd_block)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"coreinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoreInvError as exc:
        print(f"coreinv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
