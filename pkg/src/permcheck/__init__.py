"""Verification toolkit for the permanent inequality per(A)per(B) >= per(A o B)
on positive semidefinite matrices: exact and floating permanent engines,
correlation-matrix algebra, margin-reporting inequality checkers, the full
machine-checked 4x4 case analysis, and extremal ratio search."""

from .inequality import (
    CheckResult,
    LiebResult,
    check_chollet_pair,
    check_chollet_reduced,
    check_grone_pierce,
    check_lieb,
    permanent_real,
)
from .matrices import (
    DimensionError,
    SquareMatrix,
    conjugate,
    hadamard,
    permute_similarity,
    principal_submatrix,
)
from .matrixlab import (
    CorrelationError,
    CorrelationMatrix,
    NonHermitianError,
    NotPsdError,
    PsdMatrix,
    is_psd,
    rational_correlation_fixture,
    sample_correlation,
    scale_to_correlation,
)
from .permanent import permanent, permanent_naive, permanent_ryser
from .proof4x4 import (
    CaseLabel,
    EntryVector,
    ProofTrace,
    YZTerms,
    classify_case,
    compute_terms,
    expansion_per,
    expansion_per_hadamard,
    extract_entries,
    lemma3_check,
    prove_trace,
    verify_case_chain,
    verify_lemma1,
    verify_lemma2,
)
from .scalars import GaussianRational
from .search import SearchConfig, SearchResult, hill_climb, ratio

__version__ = "0.1.0"
