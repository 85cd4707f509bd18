import json
import subprocess
import sys

import numpy as np
import pytest

from coreinv.cli import main, report_bytes
from coreinv.matrix_core import parse_matrix_text, read_matrix, write_matrix


@pytest.fixture
def files(tmp_path):
    mats = {
        "diag2_0.mat": np.diag([2.0, 0.0]),
        "nilpotent.mat": np.array([[0, 1], [0, 0]]),
        "ones_row.mat": np.array([[1, 1], [0, 0]]),
        "half.mat": np.full((2, 2), 0.5),
        "rect.mat": np.ones((2, 3)),
        "m.json": np.diag([2.0, 0.0]),
    }
    for name, m in mats.items():
        write_matrix(tmp_path / name, m)
    (tmp_path / "bad.mat").write_text("2 2\n1 x\n0 0\n")
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_inv_core_writes_file(files, capsys):
    out = files / "out.mat"
    code, _, _ = run(["inv", "core", files / "diag2_0.mat", "-o", out], capsys)
    assert code == 0
    np.testing.assert_allclose(read_matrix(out), np.diag([0.5, 0]), atol=1e-15)


def test_inv_core_not_invertible_exit_3(files, capsys):
    code, _, err = run(["inv", "core", files / "nilpotent.mat"], capsys)
    assert code == 3
    assert "rank(A)=1, rank(A^2)=0: not core invertible" in err
    code, _, err = run(["inv", "group", files / "nilpotent.mat"], capsys)
    assert code == 3 and "not group invertible" in err
    code, _, _ = run(["inv", "core-proj", files / "nilpotent.mat"], capsys)
    assert code == 3


def test_inv_mp_to_stdout(files, capsys):
    code, out, _ = run(["inv", "mp", files / "ones_row.mat"], capsys)
    assert code == 0
    np.testing.assert_allclose(parse_matrix_text(out), [[0.5, 0], [0.5, 0]], atol=1e-12)
    code, out, _ = run(["inv", "mp", files / "rect.mat"], capsys)
    assert code == 0 and out.startswith("3 2")


def test_inv_json_and_drazin(files, capsys):
    code, out, _ = run(["inv", "core", files / "m.json"], capsys)
    assert code == 0 and json.loads(out)["rows"] == 2
    code, out, _ = run(["inv", "drazin", files / "nilpotent.mat"], capsys)
    assert code == 0 and out.splitlines()[1:] == ["0.0 0.0", "0.0 0.0"]


@pytest.mark.parametrize(
    "argv",
    [
        ["inv", "core", "bad.mat"],
        ["inv", "core", "missing.mat"],
        ["inv", "core", "rect.mat"],
        ["inv", "bogus", "diag2_0.mat"],
        ["check", "ep", "bad.mat"],
        ["inv", "core", "diag2_0.mat", "--rtol", "-1"],
        [],
    ],
)
def test_usage_errors_exit_2(files, capsys, argv):
    argv = [str(files / a) if a.endswith(".mat") else a for a in argv]
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


@pytest.mark.parametrize(
    "pred, name, code",
    [
        ("ep", "diag2_0.mat", 0),
        ("ep", "ones_row.mat", 1),
        ("projection", "half.mat", 0),
        ("projection", "ones_row.mat", 1),
        ("core-invertible", "ones_row.mat", 0),
        ("core-invertible", "nilpotent.mat", 1),
        ("nilpotent", "nilpotent.mat", 0),
        ("nilpotent", "diag2_0.mat", 1),
    ],
)
def test_check_predicates(files, capsys, pred, name, code):
    got, out, _ = run(["check", pred, files / name], capsys)
    assert got == code
    assert out.splitlines()[0] == ("true" if code == 0 else "false")


def test_suite_zero_instances_is_usage_error(capsys):
    code, _, _ = run(["suite", "thm4.2", "--instances", "0"], capsys)
    assert code == 2


def test_suite_bad_dims_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["suite", "thm3.4", "--dims", "5..2"])
    assert exc.value.code == 2


def test_suite_report_schema_and_determinism(tmp_path, capsys):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for p in paths:
        code, _, _ = run(["suite", "thm3.4", "--instances", "25", "--seed", "7", "--dims", "2..6",
                          "--report", p], capsys)
        assert code == 0
    r1, r2 = (json.loads(p.read_text(encoding="utf-8")) for p in paths)
    assert set(r1) >= {"suite", "seed", "dims", "instances", "rtol", "atol", "results", "aggregate", "duration_ms"}
    assert r1["dims"] == [2, 6] and r1["instances"] == 25
    agg = r1["aggregate"]
    assert set(agg) == {"pass", "fail", "not_met", "ambiguous"} and sum(agg.values()) == 25
    assert agg["fail"] == 0
    row = r1["results"][0]
    assert set(row) >= {"index", "seed", "hypotheses", "side1", "side2", "pass", "max_residual"}
    assert all(2 <= r["n"] <= 6 for r in r1["results"])
    r1.pop("duration_ms"), r2.pop("duration_ms")
    assert report_bytes(r1) == report_bytes(r2)


def test_gen_writes_manifest(tmp_path, capsys):
    out = tmp_path / "gen"
    code, _, _ = run(["gen", "thm2.4", "--count", "3", "--seed", "5", "--dims", "2..3", "--out", out], capsys)
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["count"] == 3 and len(manifest["instances"]) == 3
    entry = manifest["instances"][0]
    assert entry["family"] == "thm2.4" and entry["index"] == 0
    assert "aba^pi=0" in entry["hypothesis_residuals"]
    a = read_matrix(out / entry["files"]["a"])
    assert a.shape == (entry["n"], entry["n"])
    code, _, _ = run(["gen", "core-invertible", "--count", "2", "--out", out], capsys)
    assert code == 0


def test_block_commands(tmp_path, capsys):
    one = lambda x: np.array([[x]], dtype=complex)  # noqa: E731
    for name, val in zip("ABCD", (0, 1, 1, 0)):
        write_matrix(tmp_path / f"{name}.mat", one(val))
    blocks = [tmp_path / f"{n}.mat" for n in "ABCD"]
    code, out, _ = run(["block", "thm4.2", *blocks], capsys)
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, _, _ = run(["block", "thm4.4", *blocks], capsys)
    assert code == 0
    code, _, _ = run(["block", "permuted", *blocks], capsys)
    assert code == 0
    code, _, _ = run(["block", "lem4.1", blocks[1], blocks[2]], capsys)
    assert code == 0

    write_matrix(tmp_path / "M.mat", np.array([[1, 1], [1, 1]]))
    code, out, _ = run(["block", "thm4.2", tmp_path / "M.mat", "--split", "1"], capsys)
    assert code == 1 and json.loads(out)["status"] == "not_met"
    code, _, _ = run(["block", "thm4.2", tmp_path / "M.mat", "--split", "2"], capsys)
    assert code == 2
    code, _, _ = run(["block", "thm4.2", blocks[0], blocks[1]], capsys)
    assert code == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "coreinv", "check", "ep", str(files / "diag2_0.mat")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("true")
