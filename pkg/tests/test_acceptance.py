"""Acceptance suite: one test (or parametrized group) per criterion."""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from primefrac.cli import et_point_set, main, random_alpha, vinogradov_draw
from primefrac.constants import convergent_of
from primefrac.exact import crt_partial_fractions
from primefrac.expsum import (
    ExpSumParams,
    direct_exponential_sum,
    distinct_sum_S,
    dr_coefficient_audit,
    erdos_turan_check,
    lemma1_lhs,
    lemma2_lhs,
    min_distance,
    orthogonality_sum,
    vinogradov_sum,
)
from primefrac.oracle import ALL_UP_TO_N, PRIMES_IN_WINDOW, DenomClass, best_multi_approx, numerators_for
from primefrac.partitions import distinct_sum_by_inversion
from primefrac.primes import sieve_window
from primefrac.rng import SplitMix64
from primefrac.search import (
    EXHAUSTED,
    SearchParams,
    conjecture_scan,
    hypothesis_for,
    kappa,
    le_power,
    theorem1_search,
)

criterion = pytest.mark.criterion


def check_certificate(res, exact_target=None):
    """Exact error, met_target and numerator round-trip, all recomputed from scratch."""
    value = sum((Fraction(a, q) for a, q in zip(res.numerators, res.denominators)), Fraction(0))
    err = abs(res.alpha - value)
    assert err == res.error
    target = res.target_bound if exact_target is None else exact_target
    assert res.met_target == (target is not None and err <= target)
    M = math.lcm(*res.denominators)
    b = value * M
    assert b.denominator == 1
    b = b.numerator
    dens = list(res.denominators)
    if all(math.gcd(x, y) == 1 for x, y in itertools.combinations(dens, 2)):
        pf = crt_partial_fractions(b, dens)
        assert pf.value == value
        assert list(res.numerators[1:]) == pf.numerators[1:]
        assert res.numerators[0] == pf.numerators[0] + pf.integer_part * dens[0]
    else:
        nums = numerators_for(b, dens)
        assert sum(Fraction(a, q) for a, q in zip(nums, dens)) == value


# -- 1 ------------------------------------------------------------------------


@criterion(1, "partition inversion equals direct distinct-tuple sum")
def test_criterion_01_mobius_inversion():
    rng = SplitMix64(101)
    start = time.perf_counter()
    for n in range(1, 6):
        for _ in range(100):
            d = rng.randint(1, 6)
            table = np.array([rng.randint(-1000, 1000) for _ in range(d**n)], dtype=np.int64).reshape((d,) * n)

            def f(*xs):
                return int(table[xs])

            direct = sum(f(*t) for t in itertools.permutations(range(d), n))
            assert distinct_sum_by_inversion(f, n, range(d)) == direct
    assert time.perf_counter() - start < 10


# -- 2 ------------------------------------------------------------------------


@criterion(2, "orthogonality relation for q <= 200, |m| <= 500")
def test_criterion_02_orthogonality():
    start = time.perf_counter()
    m = np.arange(-500, 501)
    for q in range(1, 201):
        expected = np.where(m % q == 0, q, 0)
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                assert np.abs(orthogonality_sum(a, q, m) - expected).max() <= 1e-9 * q
    assert time.perf_counter() - start < 60


# -- 3 ------------------------------------------------------------------------


@criterion(3, "Erdos-Turan contrapositive on 500 seeded point sets")
def test_criterion_03_erdos_turan():
    rng = SplitMix64(7)
    for _ in range(500):
        L, points = et_point_set(rng, 200, 50, 1000)
        assert 1 <= len(points) <= 200 and 2 <= L <= 50
        assert min_distance(points) * L >= 1
        res = erdos_turan_check(points, L)
        assert res.S > len(points) / 6 and not res.conclusion


# -- 4 ------------------------------------------------------------------------


@criterion(4, "max d_r <= 2^(n+k+1) k^k on the full grid")
@pytest.mark.parametrize("N", [20, 40, 60])
def test_criterion_04_dr_bound(N):
    P = sieve_window(N)
    for n, k, L in itertools.product((1, 2, 3), (0, 1, 2), range(1, 31)):
        audit = dr_coefficient_audit(L, P, k, n)
        assert isinstance(audit.max_dr, int) and audit.bound == 2 ** (n + k + 1) * k**k
        assert audit.max_dr <= audit.bound


# -- 5 ------------------------------------------------------------------------


@criterion(5, "Vinogradov sum <= N + 2q(1 + ln q)")
def test_criterion_05_vinogradov():
    assert vinogradov_sum(1, 3, 2).lhs == 6
    rng = SplitMix64(5)
    for _ in range(300):
        a, q, N = vinogradov_draw(rng, 2000, 2000)
        assert math.gcd(a, q) == 1
        res = vinogradov_sum(a, q, N)
        assert res.lhs <= N + 2 * q * (1 + math.log(q))


# -- 6 ------------------------------------------------------------------------


def _histogram_draws(count=50):
    rng = SplitMix64(6)
    draws = []
    while len(draws) < count:
        N, n = rng.randint(8, 80), rng.randint(1, 4)
        q = rng.randint(2, 300)
        P = sieve_window(N, q)
        if len(P) < n or len(P) ** n > 10**6:
            continue
        a = rng.randint(1, q)
        if math.gcd(a, q) != 1:
            continue
        draws.append((a, q, n, rng.randint(1, 20), N, P))
    return draws


@criterion(6, "grouped histogram sums agree with direct enumeration")
def test_criterion_06_histogram_vs_direct():
    rng = SplitMix64(66)
    for a, q, n, L, N, P in _histogram_draws():
        p = ExpSumParams(a, q, n, 0, L, N)

        def close(got, want):
            assert abs(got - want) <= 1e-8 * max(abs(want), 1.0)

        close(lemma1_lhs(p, P).lhs, direct_exponential_sum(a, q, (1,) * n, L, P))
        pattern = [1] * n
        for _ in range(rng.randint(0, n - 1)):
            i = rng.below(len(pattern) - 1) if len(pattern) > 1 else 0
            if len(pattern) > 1:
                pattern[i] += pattern.pop(i + 1)
        pattern = tuple(pattern)
        rep = lemma2_lhs(ExpSumParams(a, q, n, 0, L, N, pattern), P)
        close(rep.lhs, direct_exponential_sum(a, q, pattern, L, P))
        close(distinct_sum_S(a, q, n, L, P).lhs, direct_exponential_sum(a, q, (1,) * n, L, P, distinct=True))


# -- 7, 8, 9 ------------------------------------------------------------------


def naive_pair_optimum(alpha, N):
    u, v = alpha.numerator, alpha.denominator
    a = np.arange(-2 * N, 2 * N + 1, dtype=np.int64)
    best = None
    for q1, q2 in itertools.product(range(1, N + 1), repeat=2):
        vals = np.abs(u * q1 * q2 - v * (a[:, None] * q2 + a[None, :] * q1))
        cand = Fraction(int(vals.min()), v * q1 * q2)
        best = cand if best is None or cand < best else best
    return best


@criterion(8, "oracle equals naive brute force")
def test_criterion_08_oracle_vs_naive():
    rng = SplitMix64(8)
    for _ in range(50):
        N = rng.randint(2, 12)
        alpha = rng.fraction(10**6)
        res = best_multi_approx(alpha, DenomClass(ALL_UP_TO_N, N, 2))
        check_certificate(res)
        assert res.error == naive_pair_optimum(alpha, N)
    res = best_multi_approx(Fraction(355, 113), DenomClass(ALL_UP_TO_N, 10, 1))
    assert res.denominators == (7,) and res.error == Fraction(1, 791)
    check_certificate(res)


def _search_draws(N, count=20):
    rng = SplitMix64(900 + N)
    phi = kappa(2)
    draws = []
    while len(draws) < count:
        alpha = random_alpha(rng, terms=14)
        a, q = hypothesis_for(alpha, N, phi)
        if not N <= q or not le_power(q, N, Fraction(5, 4)):
            continue
        draws.append((alpha, a, q))
    return draws


@criterion(9, "search never beats the oracle; exhaustive scan equals it")
@pytest.mark.parametrize("N", [40, 60])
def test_criterion_09_search_quality(N):
    eps = Fraction(1, 4)
    for alpha, a, q in _search_draws(N):
        p = SearchParams(alpha, a, q, N, 2, eps, kappa(2))
        P = sieve_window(N, q)
        orc = best_multi_approx(alpha, DenomClass(PRIMES_IN_WINDOW, N, 2, q))
        fast = theorem1_search(p, P)
        full = theorem1_search(p, P, stop_early=False)
        for res in (orc, fast, full):
            check_certificate(res)
        assert fast.error >= orc.error
        assert full.branch == EXHAUSTED and full.error == orc.error
        if fast.branch == EXHAUSTED:
            assert fast.error == orc.error


@criterion(7, "certificate soundness on every search, oracle and scan row")
def test_criterion_07_certificates():
    golden = [convergent_of("golden", 10**6), convergent_of("golden", 10**9)]
    rows = conjecture_scan(golden, list(range(40, 201, 20)), 2, Fraction(1, 8))
    assert rows
    for row in rows:
        res = row["result"]
        check_certificate(res)
        assert res.is_sound()
    rows3 = conjecture_scan([convergent_of("pi", 10**7)], [40, 60], 3, Fraction(1, 4))
    for row in rows3:
        check_certificate(row["result"])
    for N in (30, 50):
        for n in (1, 2, 3):
            check_certificate(best_multi_approx(golden[0], DenomClass(PRIMES_IN_WINDOW, N, n)))


# -- 10, 11 -------------------------------------------------------------------


@criterion(10, "kappa(n) table for n = 1..10")
def test_criterion_10_kappa():
    for n in range(1, 11):
        assert kappa(n) == Fraction(3 * n - n // 3 - 1, 4)
    assert kappa(2) == Fraction(5, 4) and kappa(3) == Fraction(7, 4)


@criterion(11, "config + seed reruns are byte-identical")
@pytest.mark.parametrize(
    "args",
    [
        ["et-audit", "--trials", "50", "--seed", "7"],
        ["vinogradov-audit", "--trials", "50", "--seed", "7", "--format", "json"],
        ["conjecture-scan", "--N", "40,60", "--random-alphas", "3", "--seed", "7"],
        ["search", "--alpha", "377/610", "--N", "50", "--n", "2", "--epsilon", "1/2"],
        ["kappa-table", "--n", "1..10", "--format", "json"],
    ],
)
def test_criterion_11_reproducible(args, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}"
        assert main(args + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
