"""Core inverses of complex matrices, the generalized inverses around them,
and executable checks of additive and block results about them."""

from .errors import (
    CoreInvError,
    GenerationExhausted,
    HypothesisNotMet,
    NotApplicable,
    NotCoreInvertible,
    NotGroupInvertible,
    NotIdempotent,
    NotProjection,
    Singular,
    VerificationError,
)
from .matrix_core import DEFAULT_TOL, Tolerance, rank, rank_factorization, read_matrix, write_matrix
from .gen_inverse import (
    InverseKind,
    core_inverse,
    core_inverse_via_projection,
    drazin_inverse,
    group_inverse,
    is_ep,
    is_projection,
    moore_penrose,
    verify_axioms,
)
from .pierce import decompose, triangular_core_inverse, triangular_group_inverse
from .theorems import CHECKERS, TheoremVerdict
from .block4 import BlockMatrix2x2, antidiag_core_inverse, check_thm_4_2, check_thm_4_4
from .suites import run_suite

__version__ = "0.1.0"
