"""Dense complex matrices: arithmetic, rank decisions, factorizations and I/O.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every function
accepts array-likes, validates them with :func:`as_matrix` and returns new
arrays; inputs are never modified.
"""

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import Singular

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative thresholds for rank decisions and comparisons.

    A singular value counts toward the rank when it exceeds
    ``max(atol, rtol * sigma_max)``.  Two matrices compare equal when
    ``||A - B||_F <= atol + rtol * max(||A||_F, ||B||_F)``.
    """

    atol: float = 1e-12
    rtol: float = 1e-9

    def __post_init__(self):
        if not (self.atol >= 0 and self.rtol >= 0):
            raise ValueError("tolerances must be non-negative")
        if self.atol == 0 and self.rtol == 0:
            raise ValueError("atol and rtol cannot both be zero")

    def rank_threshold(self, sigma_max):
        return max(self.atol, self.rtol * sigma_max)

    @property
    def residual_bound(self):
        """Bound applied to normalized (dimensionless) residuals."""
        return self.atol + self.rtol


DEFAULT_TOL = Tolerance()


def default_rank_tol(shape):
    m, n = shape
    return Tolerance(atol=0.0, rtol=max(m, n, 1) * EPS * 64)


@dataclass(frozen=True)
class RankFactorization:
    F: np.ndarray
    G: np.ndarray
    r: int

    @property
    def product(self):
        return self.F @ self.G


def as_matrix(a):
    """Validate and convert ``a`` to a 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _square(a):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def identity(n):
    return np.eye(n, dtype=np.complex128)


def zeros(m, n=None):
    return np.zeros((m, m if n is None else n), dtype=np.complex128)


def conj_transpose(a):
    return as_matrix(a).conj().T.copy()


def matmul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def add(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a + b


def sub(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a - b


def scale(c, a):
    return complex(c) * as_matrix(a)


def fro(a):
    return float(np.linalg.norm(a))


def singular_values(a):
    a = as_matrix(a)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def _threshold(s, shape, tol):
    if tol is None:
        tol = default_rank_tol(shape)
    smax = s[0] if s.size else 0.0
    return tol.rank_threshold(smax)


def rank(a, tol=None):
    """Number of singular values above ``max(atol, rtol * sigma_max)``.

    With ``tol=None`` the threshold is ``max(m, n) * eps * 64`` relative.
    """
    a = as_matrix(a)
    s = singular_values(a)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > _threshold(s, a.shape, tol)))


def rank_margin(a, tol=None, factor=10.0):
    """Rank together with a flag telling whether the decision is borderline.

    The decision is borderline when some singular value lies within
    ``factor`` of the threshold on either side.
    """
    a = as_matrix(a)
    s = singular_values(a)
    if s.size == 0:
        return 0, False
    thr = _threshold(s, a.shape, tol)
    r = int(np.count_nonzero(s > thr))
    if thr == 0:
        return r, False
    near = np.any((s > thr / factor) & (s <= thr * factor))
    return r, bool(near)


def truncate_at_scale(x, scale):
    """Drop singular values of ``x`` at rounding level for ``scale``.

    ``scale`` bounds the size of the computation that produced ``x``, such as
    ``||A||^k`` for a power.  A product that is exactly zero comes out as noise
    of order ``eps * scale``, which would otherwise count toward its rank.
    """
    x = as_matrix(x)
    if x.size == 0:
        return x
    u, s, vh = np.linalg.svd(x)
    floor = default_rank_tol(x.shape).rtol * max(scale, s[0])
    keep = s > floor
    return (u[:, keep] * s[keep]) @ vh[keep]


def rank_factorization(a, tol=None):
    """Full-rank factorization ``A = F G`` from a truncated SVD."""
    a = as_matrix(a)
    m, n = a.shape
    if a.size == 0:
        return RankFactorization(zeros(m, 0), zeros(0, n), 0)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    r = int(np.count_nonzero(s > _threshold(s, a.shape, tol)))
    F = u[:, :r] * s[:r]
    G = vh[:r, :]
    return RankFactorization(F, G, r)


def inverse(a, tol=None):
    """Ordinary inverse; raises :class:`Singular` when rank(A) < n."""
    a = _square(a)
    n = a.shape[0]
    if n == 0:
        return zeros(0)
    if rank(a, tol) < n:
        raise Singular(f"matrix of size {n} is singular at the given tolerance")
    return np.linalg.solve(a, identity(n))


def approx_eq(a, b, tol=DEFAULT_TOL):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return fro(a - b) <= tol.atol + tol.rtol * max(fro(a), fro(b))


def range_equal(a, b, tol=None):
    """Column spaces of ``a`` and ``b`` coincide."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise ValueError("range_equal needs equal row counts")
    ra = rank(a, tol)
    rb = rank(b, tol)
    return ra == rb and rank(np.hstack([a, b]), tol) == ra


def normalized_residual(m, *factors):
    """``||m||_F / (1 + prod ||f||_F)`` -- the scale-free size of ``m``."""
    s = 1.0
    for f in factors:
        s *= fro(f)
    return fro(m) / (1.0 + s)


# --- text / JSON formats --------------------------------------------------

_REAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_IMAG_RE = re.compile(rf"^(?P<im>[+-]?(?:{_REAL})?)i$")
_FULL_RE = re.compile(rf"^(?P<re>[+-]?{_REAL})(?:(?P<im>[+-](?:{_REAL})?)i)?$")


def _imag_value(s):
    if s in ("", "+"):
        return 1.0
    if s == "-":
        return -1.0
    return float(s)


def parse_complex(tok):
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``i`` alone means 1i)."""
    m = _IMAG_RE.match(tok)
    if m:
        return complex(0.0, _imag_value(m.group("im")))
    m = _FULL_RE.match(tok)
    if m is None:
        raise ValueError(f"bad complex literal: {tok!r}")
    im = m.group("im")
    return complex(float(m.group("re")), 0.0 if im is None else _imag_value(im))


def format_complex(z):
    z = complex(z)
    if z.imag == 0:
        return repr(float(z.real))
    sign = "-" if np.signbit(z.imag) else "+"
    return f"{float(z.real)!r}{sign}{abs(z.imag)!r}i"


def parse_matrix_text(text):
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError("first line must be 'm n'")
    m, n = (int(t) for t in header)
    if m <= 0 or n <= 0:
        raise ValueError("matrix dimensions must be positive")
    rows = lines[1:]
    if len(rows) != m:
        raise ValueError(f"expected {m} rows, found {len(rows)}")
    out = zeros(m, n)
    for i, row in enumerate(rows):
        toks = row.split()
        if len(toks) != n:
            raise ValueError(f"row {i + 1}: expected {n} entries, found {len(toks)}")
        out[i] = [parse_complex(t) for t in toks]
    return as_matrix(out)


def format_matrix_text(a):
    a = as_matrix(a)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    lines += [" ".join(format_complex(z) for z in row) for row in a]
    return "\n".join(lines) + "\n"


def matrix_to_json(a):
    a = as_matrix(a)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "data": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(obj):
    rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    if rows <= 0 or cols <= 0 or len(data) != rows * cols:
        raise ValueError("JSON matrix: data length must equal rows*cols")
    vals = [complex(float(re_), float(im)) for re_, im in data]
    return as_matrix(np.array(vals, dtype=np.complex128).reshape(rows, cols))


def read_matrix(path):
    """Read a matrix from ``path``; ``.json`` files use the JSON layout."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return matrix_from_json(json.loads(text))
    return parse_matrix_text(text)


def write_matrix(path, a):
    with open(path, "w", encoding="utf-8") as fh:
        if str(path).endswith(".json"):
            json.dump(matrix_to_json(a), fh)
            fh.write("\n")
        else:
            fh.write(format_matrix_text(a))
