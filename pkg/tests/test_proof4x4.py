import random

import pytest
from gmpy2 import mpq

from permcheck.matrices import SquareMatrix, conjugate, hadamard
from permcheck.matrixlab import sample_correlation
from permcheck.permanent import permanent_naive
from permcheck.proof4x4 import (
    CaseLabel,
    EntryVector,
    PreconditionError,
    classify_case,
    compute_terms,
    expansion_per,
    expansion_per_hadamard,
    extract_entries,
    lemma2_submatrices,
    lemma3_check,
    prove_trace,
    verify_case_chain,
    verify_lemma1,
    verify_lemma2,
)
from permcheck.runs import random_entry_vector
from permcheck.scalars import GaussianRational

from conftest import correlation_from_entries, half_matrix


def zeros_entries():
    return EntryVector(*(0j,) * 6)


class TestExtractEntries:
    def test_identity(self, i4):
        e = extract_entries(i4)
        assert e.as_tuple() == (0j,) * 6

    def test_ones(self, j4):
        assert extract_entries(j4).as_tuple() == (1 + 0j,) * 6

    def test_positions(self):
        a = correlation_from_entries(0.5j, 0, 0, 0, 0, 0)
        e = extract_entries(a)
        assert e.x == 0.5j and e.y == e.z == e.t == e.u == e.w == 0

    def test_wrong_dimension(self):
        from permcheck.matrices import DimensionError

        with pytest.raises(DimensionError):
            extract_entries(SquareMatrix.identity(3))


class TestComputeTerms:
    def test_all_zero(self):
        t = compute_terms(zeros_entries())
        assert all(v == 0 for v in t.y + t.z + t.s)
        assert t.sq_total == 0 and t.pair_sq == 0

    def test_all_half_exact(self):
        h = GaussianRational(mpq(1, 2))
        t = compute_terms(EntryVector(*(h,) * 6))
        assert t.y[:4] == (mpq(1, 4),) * 4
        assert t.y[4:] == (mpq(1, 8),) * 3
        assert t.z[:4] == (mpq(1, 32),) * 4
        assert t.z[4:] == (mpq(1, 128),) * 3
        assert t.sq_total == mpq(3, 2)
        assert t.s == (mpq(3, 4),) * 4

    def test_all_ones(self, j4):
        t = compute_terms(extract_entries(j4))
        assert all(v == 2 for v in t.y)
        assert all(v == 2 for v in t.z)
        assert t.sq_total == 6 and t.pair_sq == 3

    def test_z_terms_nonnegative(self):
        for seed in range(20):
            t = compute_terms(extract_entries(sample_correlation(4, seed)))
            assert all(zi >= 0 for zi in t.z)
            assert all(si >= 0 for si in t.s)
            assert all(abs(yi) <= 2 + 1e-12 for yi in t.y)


class TestExpansions:
    def test_zeros(self):
        assert expansion_per(zeros_entries()) == 1
        assert expansion_per_hadamard(zeros_entries()) == 1

    def test_ones(self, j4):
        e = extract_entries(j4)
        assert expansion_per(e) == pytest.approx(24.0)
        assert expansion_per_hadamard(e) == pytest.approx(24.0)

    def test_half_exact(self):
        h = GaussianRational(mpq(1, 2))
        e = EntryVector(*(h,) * 6)
        assert expansion_per(e) == mpq(65, 16)
        m = e.assemble()
        assert expansion_per_hadamard(e) == permanent_naive(hadamard(m, conjugate(m))).re

    def test_polynomial_identity_random_rational(self):
        # exact agreement at random rational points; the entries are not
        # magnitude-constrained because the identity is polynomial
        rng = random.Random(123)
        for _ in range(40):
            e = random_entry_vector(rng)
            m = e.assemble()
            assert expansion_per(e) == permanent_naive(m).re
            had = hadamard(m, conjugate(m))
            assert expansion_per_hadamard(e) == permanent_naive(had).re


class TestLemma1:
    def test_identity_matrix(self, i4):
        res = verify_lemma1(i4)
        assert all(c.margin == pytest.approx(1.0) for c in res.bounds)
        assert res.holds

    def test_half_matrix(self):
        res = verify_lemma1(half_matrix(exact=True))
        assert all(c.margin == mpq(1, 2) for c in res.bounds)
        assert res.holds

    def test_rank_one_sample_hits_equality(self):
        res = verify_lemma1(sample_correlation(4, 3, "rank-deficient", 1))
        assert min(abs(float(c.margin)) for c in res.bounds) < 1e-10
        assert res.holds

    def test_determinant_identity_random_rational(self):
        rng = random.Random(7)
        for _ in range(40):
            res = verify_lemma1(random_entry_vector(rng).assemble())
            assert all(c.margin == 0 for c in res.identities)

    def test_random_samples(self):
        for seed in range(30):
            assert verify_lemma1(sample_correlation(4, seed)).holds


class TestLemma2:
    def test_identity_matrix(self, i4):
        res = verify_lemma2(i4)
        assert all(abs(float(c.margin)) <= 1e-12 for c in res.bounds)
        assert res.holds

    def test_all_ones(self, j4):
        res = verify_lemma2(j4)
        assert all(float(c.margin) == pytest.approx(18.0) for c in res.bounds)

    def test_half_matrix(self):
        res = verify_lemma2(half_matrix(exact=True))
        assert all(c.margin == mpq(65, 16) - 2 for c in res.bounds)

    def test_permanent_identities_random_rational(self):
        rng = random.Random(8)
        for _ in range(40):
            e = random_entry_vector(rng)
            m = e.assemble()
            t = compute_terms(e)
            for i, sub in enumerate(lemma2_submatrices(m)):
                p = permanent_naive(sub)
                assert p.im == 0 and p.re == 1 + t.y[i] + t.s[i]

    def test_random_samples(self):
        for seed in range(30):
            assert verify_lemma2(sample_correlation(4, seed)).holds


class TestLemma3:
    def test_origin(self):
        assert lemma3_check(0.0, 0.0, 0.0).margin == 0

    def test_sphere_boundary(self):
        v = 1 / 3**0.5
        r = lemma3_check(v, v, v)
        assert abs(r.margin) <= 1e-12

    def test_half(self):
        assert lemma3_check(0.5, 0.0, 0.0).margin == pytest.approx(3 / 16)

    def test_exact(self):
        r = lemma3_check(mpq(1, 2), mpq(1, 3), mpq(1, 4))
        assert r.margin > 0 and r.tol == 0

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            lemma3_check(1.005, 0.0, 0.0)  # squares sum to 1.01


class TestClassifyCase:
    @staticmethod
    def terms_with(y, s):
        t = compute_terms(zeros_entries())
        import dataclasses

        return dataclasses.replace(t, y=tuple(y) + t.y[4:], s=tuple(s))

    def test_all_zero_is_case1(self):
        label, m = classify_case(self.terms_with([0, 0, 0, 0], [0, 0, 0, 0]))
        assert label is CaseLabel.CASE1 and m == 1

    def test_all_negative_is_case2(self):
        label, m = classify_case(self.terms_with([-0.1, -0.2, -0.3, -0.4], [0.1] * 4))
        assert label is CaseLabel.CASE2 and m is None

    def test_mixed_large_s(self):
        label, m = classify_case(
            self.terms_with([0.1, -0.2, 0.3, -0.4], [1.2, 0.9, 0.8, 0.7])
        )
        assert label is CaseLabel.CASE3_TO_1 and m == 1

    def test_mixed_small_s(self):
        label, m = classify_case(
            self.terms_with([0.1, -0.2, 0.3, -0.4], [0.5, 0.9, 0.8, 0.7])
        )
        assert label is CaseLabel.CASE3_TO_2 and m == 3

    def test_case1_argmax(self):
        label, m = classify_case(self.terms_with([0.1, 0.2, 0.3, 0.4], [0.1, 0.9, 0.9, 0.2]))
        assert label is CaseLabel.CASE1 and m == 2  # tie broken to smallest index


class TestCaseChain:
    def test_identity(self, i4):
        trace = verify_case_chain(i4)
        assert trace.case_label is CaseLabel.CASE1
        assert trace.verdict == "verified"
        final = trace.links[-1]
        assert final.context == "reduced-inequality" and abs(final.margin) <= 1e-12

    def test_all_ones(self, j4):
        trace = verify_case_chain(j4)
        assert trace.case_label is CaseLabel.CASE1
        assert trace.verdict == "verified"
        assert trace.links[-1].margin == pytest.approx(552.0)

    def test_exact_half_matrix(self):
        trace = verify_case_chain(half_matrix(exact=True))
        assert trace.verdict == "verified"
        assert all(c.tol == 0 for c in trace.links)

    def test_random_samples_all_verified(self):
        for seed in range(100):
            trace = verify_case_chain(sample_correlation(4, seed))
            assert trace.verdict == "verified"
            assert trace.min_link_margin >= -1e-9

    def test_case_label_consistency(self):
        for seed in range(50):
            trace = verify_case_chain(sample_correlation(4, seed))
            ys = trace.terms.y[:4]
            if trace.case_label is CaseLabel.CASE1:
                assert all(y >= 0 for y in ys)
            elif trace.case_label is CaseLabel.CASE2:
                assert all(y < 0 for y in ys)
            else:
                assert any(y >= 0 for y in ys) and any(y < 0 for y in ys)


class TestProveTrace:
    def test_identity(self, i4):
        assert prove_trace(i4).verdict == "verified"

    def test_all_ones(self, j4):
        assert prove_trace(j4).verdict == "verified"

    def test_deterministic_bytes(self):
        a = sample_correlation(4, 31337)
        assert prove_trace(a).to_json() == prove_trace(a).to_json()

    def test_json_shape(self):
        import json

        doc = json.loads(prove_trace(sample_correlation(4, 1)).to_json())
        assert {"entries", "terms", "case", "links", "expansion_checks", "verdict", "lemma1", "lemma2"} <= set(doc)
