import cmath
import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primefrac.errors import BudgetExceeded, InvalidInput
from primefrac.expsum import (
    ExpSumParams,
    character_sums,
    direct_exponential_sum,
    distinct_histogram,
    distinct_sum_S,
    distinct_threshold,
    dr_coefficient_audit,
    dr_coefficients,
    erdos_turan_check,
    grouped_l_sum,
    lemma1_lhs,
    lemma2_lhs,
    orthogonality_sum,
    product_residue_histogram,
    validate_conditions,
    vinogradov_sum,
)
from primefrac.primes import sieve_window


def e(x):
    return cmath.exp(2j * math.pi * x)


def naive_sum(a, q, pattern, L, primes, distinct=False):
    """Pure-Python complex summation, one term per tuple."""
    it = itertools.permutations(primes, len(pattern)) if distinct else itertools.product(primes, repeat=len(pattern))
    tuples = list(it)
    total = 0.0
    for l in range(1, L + 1):
        s = sum(e(Fraction(l * a * math.prod(p**r for p, r in zip(t, pattern)) % q, q)) for t in tuples)
        total += abs(s)
    return total


@pytest.mark.parametrize(
    "q, n, k, L, N, ok",
    [(50, 2, 1, 10, 40, True), (50, 2, 0, 10, 40, False), (10, 3, 3, 5, 100, False)],
)
def test_validate_conditions(q, n, k, L, N, ok):
    assert validate_conditions(ExpSumParams(a=1, q=q, n=n, k=k, L=L, N=N)) is ok


def test_params_validation():
    with pytest.raises(InvalidInput):
        ExpSumParams(a=2, q=4, n=1)
    with pytest.raises(InvalidInput):
        ExpSumParams(a=1, q=5, n=3, pattern=(1, 1))
    assert ExpSumParams(a=1, q=5, n=3, pattern=[2, 1]).pattern == (2, 1)


def test_orthogonality_examples():
    assert orthogonality_sum(2, 5, 10) == pytest.approx(5, abs=1e-9 * 5)
    assert abs(orthogonality_sum(2, 5, 3)) <= 1e-9 * 5
    assert orthogonality_sum(1, 1, 0) == pytest.approx(1)


def test_orthogonality_vectorized_matches_scalar():
    ms = np.arange(-40, 41)
    vec = orthogonality_sum(3, 14, ms)
    for m, v in zip(ms, vec):
        assert abs(v - orthogonality_sum(3, 14, int(m))) < 1e-12
        assert abs(v - (14 if m % 14 == 0 else 0)) <= 1e-9 * 14


def test_orthogonality_rejects_non_coprime():
    with pytest.raises(InvalidInput):
        orthogonality_sum(2, 4, 1)


def test_histogram_examples():
    P = sieve_window(10)
    h = product_residue_histogram(P, [1], 1, 3)
    assert list(h.counts) == [0, 1, 1]
    h = product_residue_histogram(P, [1, 1], 1, 3)
    assert list(h.counts) == [0, 2, 2]
    h = product_residue_histogram(sieve_window(50), [2, 1, 3], 1, 1)
    assert list(h.counts) == [len(sieve_window(50)) ** 3]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(1, 97), st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(-50, 50))
def test_histogram_matches_enumeration(N, q, pattern, a):
    P = sieve_window(N)
    h = product_residue_histogram(P, pattern, a, q)
    expected = [0] * q
    for t in itertools.product(P.primes, repeat=len(pattern)):
        expected[a * math.prod(p**r for p, r in zip(t, pattern)) % q] += 1
    assert list(h.counts) == expected
    assert h.total == len(P) ** len(pattern)


def test_lemma1_examples():
    # n = 1, single prime: every term has modulus one
    P = sieve_window(2)
    rep = lemma1_lhs(ExpSumParams(a=1, q=7, n=1, L=9, N=2), P)
    assert rep.lhs == pytest.approx(9)
    P = sieve_window(10)
    rep = lemma1_lhs(ExpSumParams(a=1, q=3, n=2, L=1, N=10), P)
    assert rep.lhs == pytest.approx(2)
    assert rep.term_count == 4
    rep = lemma1_lhs(ExpSumParams(a=1, q=1, n=3, L=6, N=10), P)
    assert rep.lhs == pytest.approx(6 * 8)


def test_lemma1_report_fields():
    P = sieve_window(40)
    p = ExpSumParams(a=3, q=50, n=2, k=1, L=10, N=40)
    rep = lemma1_lhs(p, P)
    assert rep.condition_ok
    expected_rhs = 2**3 * 2**2 * max(10 * 40**1.5, 10 * 40**2 / math.sqrt(50))
    assert rep.rhs_bound == pytest.approx(expected_rhs)
    assert rep.ratio == pytest.approx(rep.lhs / rep.rhs_bound)
    assert rep.params["q"] == 50
    assert rep.lhs >= 0


def test_lemma1_rejects_bad_window():
    with pytest.raises(InvalidInput):
        lemma1_lhs(ExpSumParams(a=1, q=3, n=1, N=10), sieve_window(10, 35))
    with pytest.raises(InvalidInput):
        lemma1_lhs(ExpSumParams(a=1, q=3, n=1, N=11), sieve_window(10))


def test_lemma2_examples():
    P = sieve_window(60)
    for n in (2, 3):
        p = ExpSumParams(a=5, q=101, n=n, L=7, N=60, pattern=(n,))
        assert lemma2_lhs(p, P).lhs == pytest.approx(naive_sum(5, 101, (n,), 7, P.primes), rel=1e-10)
    p1 = ExpSumParams(a=5, q=101, n=3, L=7, N=60)
    p2 = ExpSumParams(a=5, q=101, n=3, L=7, N=60, pattern=(1, 1, 1))
    assert lemma2_lhs(p2, P).lhs == lemma1_lhs(p1, P).lhs
    assert product_residue_histogram(P, (1, 1, 1), 5, 101) == product_residue_histogram(P, [1] * 3, 5, 101)
    p = ExpSumParams(a=0, q=1, n=4, L=3, N=60, pattern=(2, 2))
    assert lemma2_lhs(p, P).lhs == pytest.approx(3 * len(P) ** 2)
    with pytest.raises(InvalidInput):
        lemma2_lhs(ExpSumParams(a=1, q=3, n=2, N=60), P)


@pytest.mark.parametrize("q", [3, 17, 640, 4099])
def test_character_sum_paths_agree(q):
    rng = np.random.default_rng(q)
    counts = rng.integers(-5, 50, size=q)
    js = np.arange(q)
    fft_vals = np.conj(np.fft.fft(counts.astype(float)))
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    direct = np.array([np.dot(counts, roots[(j * np.arange(q)) % q]) for j in range(min(q, 50))])
    assert np.allclose(character_sums(counts, q, js)[:50], direct, atol=1e-8 * np.abs(counts).sum())
    assert np.allclose(fft_vals[:50], direct, atol=1e-8 * np.abs(counts).sum())


def test_grouped_l_sum_multiplicities():
    # l running past q wraps around the residues
    counts = np.array([1, 2, 0, 4, 0, 1, 1])
    q = 7
    for L in (1, 6, 7, 8, 20, 49):
        direct = sum(abs(sum(c * e(Fraction(l * r, q)) for r, c in enumerate(counts))) for l in range(1, L + 1))
        assert grouped_l_sum(counts, q, L) == pytest.approx(direct, rel=1e-12)


def test_distinct_examples():
    P = sieve_window(10)
    rep1 = lemma1_lhs(ExpSumParams(a=2, q=9, n=1, L=5, N=10), P)
    repd = distinct_sum_S(2, 9, 1, 5, P)
    assert repd.lhs == pytest.approx(rep1.lhs)
    assert distinct_sum_S(1, 3, 2, 1, P).lhs == pytest.approx(2)
    P = sieve_window(50)
    size = len(P)
    assert distinct_sum_S(0, 1, 3, 4, P).lhs == pytest.approx(4 * size * (size - 1) * (size - 2))


def test_distinct_histogram_matches_enumeration():
    P = sieve_window(40)
    for n in (1, 2, 3, 4):
        h = distinct_histogram(7, 23, n, P)
        expected = [0] * 23
        for t in itertools.permutations(P.primes, n):
            expected[7 * math.prod(t) % 23] += 1
        assert list(h) == expected


def test_distinct_cross_check_and_threshold():
    P = sieve_window(30)
    rep = distinct_sum_S(4, 45, 3, 6, P, cross_check=True)
    assert rep.lhs == pytest.approx(naive_sum(4, 45, (1, 1, 1), 6, P.primes, distinct=True), rel=1e-10)
    size = len(P)
    assert rep.rhs_bound == pytest.approx((size**3 - 9 * size**2) / 6)
    alt = distinct_sum_S(4, 45, 3, 6, P, binomial=True)
    assert alt.rhs_bound == pytest.approx(distinct_threshold(size, 3, binomial=True))
    assert alt.rhs_bound == pytest.approx((size**3 - 3 * size**2) / 6)
    assert rep.condition_ok == (rep.lhs <= rep.rhs_bound)


def test_distinct_budget():
    with pytest.raises(BudgetExceeded):
        distinct_sum_S(1, 1009, 6, 3, sieve_window(200), budget=10_000)


def test_direct_vs_naive():
    P = sieve_window(20)
    for pattern in [(1,), (1, 2), (1, 1, 1)]:
        for distinct in (False, True):
            assert direct_exponential_sum(3, 31, pattern, 5, P, distinct) == pytest.approx(
                naive_sum(3, 31, pattern, 5, P.primes, distinct), rel=1e-10
            )


def test_dr_examples():
    P = sieve_window(10)
    audit = dr_coefficient_audit(7, P, 0, 2)
    assert audit == (1, 2**3, True)
    d = dr_coefficients(4, P, 1)
    assert max(d.values()) == 1
    assert dr_coefficient_audit(4, P, 1, 2).ok
    d = dr_coefficients(10, P, 2)
    assert d[70] == 2
    audit = dr_coefficient_audit(10, P, 2, 1)
    assert audit.bound == 2 ** (1 + 3) * 4 and audit.ok


def test_dr_brute_force():
    P = sieve_window(20)
    L, k = 12, 2
    brute = {}
    for l in range(1, L + 1):
        for t in itertools.product(P.primes, repeat=k):
            r = l * math.prod(t)
            brute[r] = brute.get(r, 0) + 1
    assert dict(dr_coefficients(L, P, k)) == brute


def test_vinogradov_examples():
    res = vinogradov_sum(1, 3, 2)
    assert res.lhs == 6
    assert vinogradov_sum(1, 1, 5).lhs == 5
    assert vinogradov_sum(3, 4, 100).lhs == 110
    assert res.bound == pytest.approx(2 + 6 * (1 + math.log(3)))


def test_vinogradov_direct():
    rng = random.Random(5)
    for _ in range(20):
        q = rng.randint(1, 300)
        a = rng.choice([x for x in range(1, q + 1) if math.gcd(x, q) == 1])
        N = rng.randint(1, 400)
        direct = Fraction(0)
        for r in range(1, q + 1):
            d = Fraction(a * r, q)
            dist = min(d - math.floor(d), math.ceil(d) - d)
            direct += N if dist == 0 else min(Fraction(N), 1 / dist)
        res = vinogradov_sum(a, q, N)
        assert res.lhs == direct
        assert res.lhs <= res.bound


def test_erdos_turan_examples():
    S, thr, concl = erdos_turan_check([Fraction(1, 2)], 2)
    assert S == pytest.approx(2) and thr == pytest.approx(1 / 6) and not concl
    S, thr, concl = erdos_turan_check([Fraction(1, 4), Fraction(3, 4)], 4)
    assert S == pytest.approx(4) and not concl
    S, _, concl = erdos_turan_check([Fraction(0)], 5)
    assert S == pytest.approx(5) and not concl


def test_erdos_turan_equidistributed_points():
    # all k/J for J large: sums vanish unless J | l
    J = 60
    res = erdos_turan_check([Fraction(k, J) for k in range(J)], 10)
    assert res.S == pytest.approx(0, abs=1e-9)
    assert res.conclusion


def test_erdos_turan_large_denominators():
    pts = [Fraction(10**30 + 7, 3 * 10**30 + 1), Fraction(1, 3)]
    S = erdos_turan_check(pts, 3).S
    direct = sum(abs(sum(e(l * x) for x in pts)) for l in range(1, 4))
    assert S == pytest.approx(direct, rel=1e-9)
