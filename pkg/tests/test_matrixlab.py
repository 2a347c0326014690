import numpy as np
import pytest
from gmpy2 import mpq

from permcheck.matrices import (
    DimensionError,
    SquareMatrix,
    conjugate,
    hadamard,
    permute_similarity,
    principal_submatrix,
)
from permcheck.matrixlab import (
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
from permcheck.permanent import permanent_naive
from permcheck.scalars import GaussianRational, abs_sq

from conftest import correlation_from_entries


class TestIsPsd:
    def test_identity(self):
        ok, cert = is_psd(SquareMatrix.identity(3))
        assert ok and min(cert.pivots) == 1.0

    def test_indefinite(self):
        m = SquareMatrix.from_rows([[1 + 0j, 2 + 0j], [2 + 0j, 1 + 0j]])
        ok, _ = is_psd(m)
        assert not ok

    def test_rank_one_ones(self):
        ok, cert = is_psd(SquareMatrix.ones(4))
        assert ok

    def test_exact_mode(self):
        h = GaussianRational(mpq(1, 2))
        one = GaussianRational(1)
        ok, cert = is_psd(SquareMatrix.from_rows([[one, h], [h, one]]))
        assert ok and cert.kind == "ldl-exact"
        two = GaussianRational(2)
        ok, _ = is_psd(SquareMatrix.from_rows([[one, two], [two, one]]))
        assert not ok

    def test_exact_zero_diagonal(self):
        zero, one = GaussianRational(0), GaussianRational(1)
        ok, _ = is_psd(SquareMatrix.from_rows([[zero, zero], [zero, one]]))
        assert ok
        ok, _ = is_psd(SquareMatrix.from_rows([[zero, one], [one, one]]))
        assert not ok

    def test_non_hermitian_rejected(self):
        m = SquareMatrix.from_rows([[1 + 0j, 1 + 0j], [0j, 1 + 0j]])
        with pytest.raises(NonHermitianError):
            is_psd(m)


def test_hadamard():
    a = sample_correlation(4, 1).matrix
    i4 = SquareMatrix.identity(4)
    d = hadamard(a, i4)
    assert all(d[i, j] == (a[i, i] if i == j else 0) for i in range(4) for j in range(4))
    j4 = SquareMatrix.ones(4)
    assert hadamard(j4, j4).entries == j4.entries
    h = hadamard(a, conjugate(a))
    assert all(abs(h[i, j] - abs_sq(a[i, j])) < 1e-15 for i in range(4) for j in range(4))
    with pytest.raises(DimensionError):
        hadamard(i4, SquareMatrix.identity(3))


def test_hadamard_with_conjugate_is_real_correlation():
    a = sample_correlation(4, 2).matrix
    h = hadamard(a, conjugate(a))
    assert max(abs(e.imag) for e in h.entries) == 0
    CorrelationMatrix.validate(h)  # Schur product theorem


def test_conjugate():
    real = SquareMatrix.from_rows([[1 + 0j, 0.5 + 0j], [0.5 + 0j, 1 + 0j]])
    assert conjugate(real).entries == real.entries
    a = sample_correlation(3, 3).matrix
    assert conjugate(conjugate(a)).entries == a.entries


def test_principal_submatrix():
    i4 = SquareMatrix.identity(4)
    assert principal_submatrix(i4, 1).entries == SquareMatrix.identity(3).entries
    a = correlation_from_entries(0.1, 0.2, 0.3, 0.4, 0.5, 0.6).matrix
    # deleting row/col 4 keeps the x, y, t block
    sub = principal_submatrix(a, 4)
    assert sub[0, 1] == a[0, 1] and sub[0, 2] == a[0, 2] and sub[1, 2] == a[1, 2]
    with pytest.raises(IndexError):
        principal_submatrix(i4, 5)
    # a principal submatrix of a correlation matrix is a correlation matrix
    CorrelationMatrix.validate(principal_submatrix(sample_correlation(5, 4).matrix, 3))


def test_permute_similarity():
    a = sample_correlation(4, 5).matrix
    assert permute_similarity(a, (1, 2, 3, 4)).entries == a.entries
    b = permute_similarity(a, (1, 2, 4, 3))
    assert b[0, 2] == a[0, 3] and b[2, 3] == a[3, 2]
    assert abs(permanent_naive(b) - permanent_naive(a)) < 1e-12
    with pytest.raises(ValueError):
        permute_similarity(a, (1, 1, 2, 3))


class TestScaleToCorrelation:
    def test_diagonal(self):
        a = PsdMatrix.validate(SquareMatrix.from_rows([[4 + 0j, 0j], [0j, 9 + 0j]]))
        res = scale_to_correlation(a)
        assert not res.trivial
        c = res.correlation.matrix
        assert c.entries == SquareMatrix.identity(2).entries
        assert res.diagonal == (4.0, 9.0)
        assert res.diagonal_product == 36.0
        assert permanent_naive(a.matrix) == pytest.approx(
            permanent_naive(c).real * res.diagonal_product
        )

    def test_correlation_passthrough(self):
        a = sample_correlation(4, 6)
        res = scale_to_correlation(a)
        assert not res.trivial and res.diagonal == (1.0,) * 4
        c = res.correlation.matrix
        assert max(abs(x - y) for x, y in zip(c.entries, a.matrix.entries)) < 1e-14

    def test_zero_diagonal_trivial(self):
        a = PsdMatrix.validate(SquareMatrix.from_rows([[0j, 0j], [0j, 1 + 0j]]))
        res = scale_to_correlation(a)
        assert res.trivial and res.zero_index == 0 and res.correlation is None

    def test_exact_perfect_squares(self):
        four, nine, zero = GaussianRational(4), GaussianRational(9), GaussianRational(0)
        a = PsdMatrix.validate(SquareMatrix.from_rows([[four, zero], [zero, nine]]))
        res = scale_to_correlation(a)
        assert res.diagonal_product == 36
        p = permanent_naive(a.matrix)
        assert p == permanent_naive(res.correlation.matrix) * res.diagonal_product

    def test_round_trip_random(self):
        rng = np.random.default_rng(0)
        base = sample_correlation(4, 8).matrix.to_numpy()
        d = np.diag(rng.uniform(0.5, 3.0, size=4))
        scaled = d @ base @ d
        a = PsdMatrix.validate(SquareMatrix.from_numpy(scaled))
        res = scale_to_correlation(a)
        lhs = permanent_naive(a.matrix).real
        rhs = permanent_naive(res.correlation.matrix).real * res.diagonal_product
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_non_psd_rejected(self):
        m = SquareMatrix.from_rows([[1 + 0j, 2 + 0j], [2 + 0j, 1 + 0j]])
        with pytest.raises(NotPsdError):
            scale_to_correlation(m)


class TestSampler:
    @pytest.mark.parametrize("method,rank", [("gram-unit-complex", None), ("gram-unit-real", None), ("rank-deficient", 2)])
    def test_invariants(self, method, rank):
        for seed in range(10):
            a = sample_correlation(4, seed, method, rank)
            CorrelationMatrix.validate(a.matrix, tol=1e-10)

    def test_determinism(self):
        a = sample_correlation(4, 42).matrix
        b = sample_correlation(4, 42).matrix
        assert a.entries == b.entries

    def test_rank_one_unimodular_entries(self):
        a = sample_correlation(4, 7, "rank-deficient", 1).matrix
        assert all(abs(abs(e) - 1) < 1e-12 for e in a.entries)

    def test_real_method_is_real(self):
        a = sample_correlation(5, 9, "gram-unit-real").matrix
        assert max(abs(e.imag) for e in a.entries) < 1e-15

    def test_schur_closure(self):
        a = sample_correlation(4, 10).matrix
        b = sample_correlation(4, 11).matrix
        ok, _ = is_psd(hadamard(a, b))
        assert ok

    def test_bad_method(self):
        with pytest.raises(ValueError):
            sample_correlation(4, 0, "bogus")
        with pytest.raises(ValueError):
            sample_correlation(4, 0, "rank-deficient", 4)


def test_rational_fixture_is_exact_correlation():
    for seed in range(5):
        f = rational_correlation_fixture(4, seed)
        assert f.matrix.exact
        # validate() already ran; unit diagonal and exact hermitian symmetry
        for i in range(4):
            assert f.matrix[i, i] == GaussianRational(1)


def test_correlation_validate_rejects():
    bad_diag = SquareMatrix.from_rows([[2 + 0j, 0j], [0j, 1 + 0j]])
    with pytest.raises(CorrelationError):
        CorrelationMatrix.validate(bad_diag)
    indef = SquareMatrix.from_rows([[1 + 0j, 2 + 0j], [2 + 0j, 1 + 0j]])
    with pytest.raises(CorrelationError):
        CorrelationMatrix.validate(indef)
