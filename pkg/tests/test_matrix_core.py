import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from coreinv.errors import Singular
from coreinv.matrix_core import (
    Tolerance,
    approx_eq,
    as_matrix,
    conj_transpose,
    format_complex,
    format_matrix_text,
    inverse,
    matmul,
    matrix_from_json,
    matrix_to_json,
    normalized_residual,
    parse_complex,
    parse_matrix_text,
    range_equal,
    rank,
    rank_factorization,
    rank_margin,
    read_matrix,
    write_matrix,
)
from oracles import cgauss, naive_matmul

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


def cmat(rows, cols):
    return arrays(np.complex128, (rows, cols), elements=complexes)


# --- construction and validation ---------------------------------------------


def test_tolerance_rejects_negative_and_all_zero():
    with pytest.raises(ValueError):
        Tolerance(atol=-1.0)
    with pytest.raises(ValueError):
        Tolerance(atol=0.0, rtol=0.0)
    assert Tolerance().residual_bound == pytest.approx(1e-12 + 1e-9)


def test_as_matrix_rejects_non_finite_and_promotes_scalars():
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(ValueError):
        as_matrix([[np.inf]])
    with pytest.raises(ValueError):
        as_matrix(np.zeros((2, 2, 2)))
    m = as_matrix(3)
    assert m.shape == (1, 1) and m.dtype == np.complex128


@pytest.mark.parametrize(
    "a, expected",
    [
        ([[1j]], [[-1j]]),
        ([[1, 2], [3, 4]], [[1, 3], [2, 4]]),
        ([[0, 1 + 1j], [0, 0]], [[0, 0], [1 - 1j, 0]]),
    ],
)
def test_conj_transpose_examples(a, expected):
    np.testing.assert_array_equal(conj_transpose(a), np.array(expected, dtype=complex))


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (np.eye(2), [[1, 2], [3, 4]], [[1, 2], [3, 4]]),
        ([[0, 1], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 0]]),
        ([[1, 1], [0, 0]], [[1, 0], [0, 0]], [[1, 0], [0, 0]]),
    ],
)
def test_matmul_examples(a, b, expected):
    np.testing.assert_array_equal(matmul(a, b), np.array(expected, dtype=complex))
    np.testing.assert_array_equal(naive_matmul(a, b), np.array(expected, dtype=complex))


def test_matmul_shape_mismatch():
    with pytest.raises(ValueError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(cmat(3, k), cmat(k, 2))))
def test_matmul_matches_triple_loop(ab):
    a, b = ab
    np.testing.assert_allclose(matmul(a, b), naive_matmul(a, b), rtol=1e-12, atol=1e-9)


@given(cmat(3, 3), cmat(3, 3))
def test_conj_transpose_reverses_products(a, b):
    np.testing.assert_allclose(
        conj_transpose(matmul(a, b)), matmul(conj_transpose(b), conj_transpose(a)), rtol=1e-12, atol=1e-9
    )


# --- rank ----------------------------------------------------------------------


@pytest.mark.parametrize("a, r", [(np.eye(2), 2), ([[1, 1], [1, 1]], 1), (np.zeros((3, 3)), 0)])
def test_rank_examples(a, r):
    assert rank(a) == r
    assert rank(a, Tolerance()) == r


def test_rank_of_constructed_products(rng):
    for r in range(5):
        a = cgauss(rng, (5, r)) @ cgauss(rng, (r, 6))
        assert rank(a) == r


def test_rank_margin_flags_borderline_singular_value():
    a = np.diag([1.0, 2e-9])  # threshold 1e-9: counted, but within a factor 10
    r, amb = rank_margin(a, Tolerance())
    assert r == 2 and amb
    r, amb = rank_margin(np.diag([1.0, 5e-10]), Tolerance())
    assert r == 1 and amb
    r, amb = rank_margin(np.diag([1.0, 1e-3]), Tolerance())
    assert r == 2 and not amb


@pytest.mark.parametrize("a", [np.eye(2), np.zeros((2, 2)), np.ones((2, 2)), [[1, 2, 3], [2, 4, 6]]])
def test_rank_factorization_reproduces_matrix(a):
    fac = rank_factorization(a)
    a = as_matrix(a)
    assert fac.F.shape == (a.shape[0], fac.r) and fac.G.shape == (fac.r, a.shape[1])
    np.testing.assert_allclose(fac.product, a, atol=1e-12)
    assert fac.r == rank(a)
    if fac.r:
        assert rank(fac.F) == fac.r == rank(fac.G)


def test_rank_factorization_zero_shapes():
    fac = rank_factorization(np.zeros((2, 2)))
    assert fac.r == 0 and fac.F.shape == (2, 0) and fac.G.shape == (0, 2)


# --- inverse / comparisons -------------------------------------------------------


def test_inverse_examples():
    np.testing.assert_allclose(inverse([[2]]), [[0.5]])
    np.testing.assert_allclose(inverse([[1, 1], [0, 1]]), [[1, -1], [0, 1]], atol=1e-15)
    with pytest.raises(Singular):
        inverse([[1, 1], [1, 1]])


def test_approx_eq_examples():
    i2 = np.eye(2)
    assert approx_eq(i2, i2)
    assert not approx_eq(i2, np.zeros((2, 2)))
    a = np.eye(2) / np.sqrt(2)
    assert approx_eq(a, a + 1e-14 * np.ones((2, 2)), Tolerance(rtol=1e-9))
    with pytest.raises(ValueError):
        approx_eq(np.eye(2), np.eye(3))


def test_range_equal_examples(rng):
    assert range_equal([[1, 0], [0, 0]], [[2, 0], [0, 0]])
    assert not range_equal([[1, 0], [0, 0]], [[0, 0], [1, 0]])
    for r in range(5):
        a = cgauss(rng, (4, r)) @ cgauss(rng, (r, 4))
        assert range_equal(a, a @ a.conj().T)


def test_normalized_residual_is_scale_free():
    m = np.ones((2, 2))
    assert normalized_residual(m) == pytest.approx(1.0)  # 2 / (1 + empty product)
    big = 1e6 * np.eye(2)
    assert normalized_residual(1e-3 * m, big, big) < 1e-14


# --- I/O -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "tok, z",
    [
        ("1", 1),
        ("-2.5", -2.5),
        ("4i", 4j),
        ("i", 1j),
        ("-i", -1j),
        ("1+2i", 1 + 2j),
        ("1-2i", 1 - 2j),
        ("1e-3-4.5e2i", 1e-3 - 450j),
        ("+.5", 0.5),
        ("3+i", 3 + 1j),
    ],
)
def test_parse_complex(tok, z):
    assert parse_complex(tok) == z


@pytest.mark.parametrize("tok", ["", "1+", "ii", "1 2", "abc", "1+2j", "--1"])
def test_parse_complex_rejects_garbage(tok):
    with pytest.raises(ValueError):
        parse_complex(tok)


@given(complexes)
def test_format_then_parse_is_exact(z):
    assert parse_complex(format_complex(z)) == z


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_text_and_json_round_trip(m, n, data):
    a = data.draw(cmat(m, n))
    np.testing.assert_array_equal(parse_matrix_text(format_matrix_text(a)), a)
    np.testing.assert_array_equal(matrix_from_json(json.loads(json.dumps(matrix_to_json(a)))), a)


@pytest.mark.parametrize(
    "text",
    ["", "2\n1 2\n", "2 2\n1 0\n", "2 2\n1 0\n0\n", "0 1\n", "1 1\nx\n", "1 1\nnan\n"],
)
def test_parse_matrix_text_errors(text):
    with pytest.raises(ValueError):
        parse_matrix_text(text)


def test_json_length_mismatch():
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})


def test_read_write_dispatch_on_extension(tmp_path):
    a = np.array([[1, 2j], [-3.5, 1e-20 - 1j]])
    for name in ("m.mat", "m.json"):
        path = tmp_path / name
        write_matrix(path, a)
        np.testing.assert_array_equal(read_matrix(path), a)
    assert json.loads((tmp_path / "m.json").read_text())["rows"] == 2
