"""Exponential sums over products of primes from a window.

All sums here have the shape ``sum_l |sum_tuples e(l * a * prod / q)|``. The
inner sum only depends on the residue of ``a * prod`` modulo ``q``, so the
tuples are first collapsed into an exact integer histogram over ``Z/qZ`` and
only then turned into complex numbers. Combinatorics stay exact; the one
floating step is ``sum_r counts[r] * e(l r / q)``.

Bounds that the theory only states up to an unspecified constant are
reported with that constant set to 1 as a ratio. Nothing here asserts them.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .budget import check_budget
from .errors import InvalidInput
from .exact import dist_nearest_int
from .partitions import bell, inversion_combine
from .primes import PrimeWindow

EPS = float(np.finfo(float).eps)
# gather path is used while (#distinct l mod q) * (#nonzero residues) stays below this
_GATHER_LIMIT = 2_000_000


@dataclass(frozen=True)
class ExpSumParams:
    a: int
    q: int
    n: int
    k: int = 0
    L: int = 1
    N: int = 2
    pattern: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.q < 1 or self.n < 1 or self.k < 0 or self.L < 1 or self.N < 1:
            raise InvalidInput(f"parameters out of range: {self}")
        if math.gcd(self.a, self.q) != 1:
            raise InvalidInput(f"gcd(a, q) must be 1, got a={self.a}, q={self.q}")
        if self.pattern is not None:
            pattern = tuple(self.pattern)
            object.__setattr__(self, "pattern", pattern)
            if not pattern or any(r < 1 for r in pattern) or sum(pattern) != self.n:
                raise InvalidInput(f"pattern {pattern} must be positive and sum to n={self.n}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pattern"] = list(self.pattern) if self.pattern is not None else None
        return d


@dataclass(frozen=True)
class ExpSumReport:
    """One evaluated sum next to its comparison value.

    For ``kind`` ``"lemma1"``/``"lemma2"`` the comparison value is the
    majorant ``2^(n+k) n^n max(L N^(n/2+k/2), L N^n / sqrt(q))`` and
    ``condition_ok`` is the side-condition check. For ``kind="distinct"`` it
    is the equidistribution threshold ``(|P|^n - c |P|^(n-1)) / 6`` and
    ``condition_ok`` says whether the sum is at or below it.
    """

    lhs: float
    rhs_bound: float
    ratio: float
    condition_ok: bool
    term_count: int
    float_error_bound: float
    kind: str = "lemma1"
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ResidueHistogram:
    modulus: int
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(sum(int(c) for c in self.counts))

    def __eq__(self, other):
        if not isinstance(other, ResidueHistogram):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.counts, other.counts)


class DrAudit(NamedTuple):
    max_dr: int
    bound: int
    ok: bool


class VinogradovResult(NamedTuple):
    lhs: Fraction
    bound: float
    ratio: float


class ErdosTuranResult(NamedTuple):
    S: float
    threshold: float
    conclusion: bool


# -- small pieces -------------------------------------------------------------


def validate_conditions(p: ExpSumParams) -> bool:
    """``L <= N^n``, ``q <= L N^k`` and ``2^(n+k+1) < N``."""
    return (
        p.L <= p.N**p.n
        and p.q <= p.L * p.N**p.k
        and 2 ** (p.n + p.k + 1) < p.N
    )


def unit_roots(q: int) -> np.ndarray:
    """``e(r/q)`` for ``r = 0..q-1``."""
    return np.exp(2j * np.pi * np.arange(q) / q)


def orthogonality_sum(a: int, q: int, m):
    """``sum_{r=1}^{q} e(a m r / q)``; ``m`` may be an int or an integer array."""
    if q < 1 or math.gcd(a, q) != 1:
        raise InvalidInput(f"need q >= 1 and gcd(a, q) = 1, got a={a}, q={q}")
    roots = unit_roots(q)
    r = np.arange(1, q + 1)
    if np.isscalar(m):
        c = (a * int(m)) % q
        return complex(roots[(c * r) % q].sum())
    c = (a * np.asarray(m, dtype=np.int64)) % q
    uniq, inv = np.unique(c, return_inverse=True)
    vals = roots[(uniq[:, None] * r[None, :]) % q].sum(axis=1)
    return vals[inv.reshape(c.shape)]


def _count_dtype(total: int):
    return np.int64 if total < 2**62 else object


def product_residue_histogram(
    P: PrimeWindow | Sequence[int], pattern: Sequence[int], a: int, q: int
) -> ResidueHistogram:
    """Histogram of ``a * q_1^r_1 * ... * q_m^r_m mod q`` over ``P^m``.

    Built by folding in one factor at a time; the cost is about
    ``m * q * |P|`` instead of ``|P|^m``.
    """
    primes = list(P)
    if q < 1:
        raise InvalidInput("modulus must be positive")
    dtype = _count_dtype(max(len(primes), 1) ** len(pattern))
    counts = np.zeros(q, dtype=dtype)
    counts[a % q] = 1
    for r in pattern:
        factor = Counter(pow(p, r, q) for p in primes)
        nz = np.flatnonzero(counts)
        src = counts[nz]
        out = np.zeros(q, dtype=dtype)
        for y, mult in factor.items():
            np.add.at(out, (nz * y) % q, src * mult)
        counts = out
    return ResidueHistogram(q, counts)


def _l_multiplicities(L: int, q: int) -> np.ndarray:
    """How many ``l`` in ``1..L`` fall in each residue class mod ``q``."""
    mult = np.full(q, L // q, dtype=np.int64)
    mult[1:L % q + 1] += 1
    return mult


def character_sums(counts: np.ndarray, q: int, js: np.ndarray) -> np.ndarray:
    """``F(j) = sum_r counts[r] e(j r / q)`` for each ``j`` in ``js``."""
    c = np.asarray(counts, dtype=float)
    nz = np.flatnonzero(c)
    js = np.asarray(js, dtype=np.int64)
    if len(js) * max(len(nz), 1) <= _GATHER_LIMIT:
        roots = unit_roots(q)
        out = np.empty(len(js), dtype=complex)
        step = max(1, _GATHER_LIMIT // max(len(nz), 1))
        for s in range(0, len(js), step):
            idx = (js[s:s + step, None] * nz[None, :]) % q
            out[s:s + step] = roots[idx] @ c[nz]
        return out
    # numpy's forward transform uses e(-jr/q); counts are real so conjugate
    return np.conj(np.fft.fft(c))[js % q]


def grouped_l_sum(counts: np.ndarray, q: int, L: int) -> float:
    """``sum_{l=1}^{L} |sum_r counts[r] e(l r / q)|``."""
    mult = _l_multiplicities(L, q)
    js = np.flatnonzero(mult)
    vals = np.abs(character_sums(counts, q, js))
    return float(np.dot(mult[js], vals))


def _float_error_bound(counts: np.ndarray, q: int, L: int) -> float:
    mass = float(sum(abs(int(c)) for c in counts))
    return L * mass * max(q, 2) * EPS


def lemma_majorant(n: int, k: int, L: int, N: int, q: int) -> float:
    """``2^(n+k) n^n max(L N^(n/2+k/2), L N^n / sqrt(q))`` in floating point."""
    return 2.0 ** (n + k) * float(n) ** n * max(
        L * float(N) ** ((n + k) / 2), L * float(N) ** n / math.sqrt(q)
    )


def _check_window(p: ExpSumParams, P: PrimeWindow) -> None:
    if len(P) == 0:
        raise InvalidInput("empty prime window")
    if isinstance(P, PrimeWindow) and P.N != p.N:
        raise InvalidInput(f"window was sieved for N={P.N}, params say N={p.N}")


def _pattern_report(p: ExpSumParams, P: PrimeWindow, pattern: tuple[int, ...], kind: str) -> ExpSumReport:
    _check_window(p, P)
    hist = product_residue_histogram(P, pattern, p.a, p.q)
    lhs = grouped_l_sum(hist.counts, p.q, p.L)
    rhs = lemma_majorant(p.n, p.k, p.L, p.N, p.q)
    return ExpSumReport(
        lhs=lhs,
        rhs_bound=rhs,
        ratio=lhs / rhs if rhs > 0 else math.inf,
        condition_ok=validate_conditions(p),
        term_count=p.L * len(P) ** len(pattern),
        float_error_bound=_float_error_bound(hist.counts, p.q, p.L),
        kind=kind,
        params=p.to_dict(),
    )


def lemma1_lhs(p: ExpSumParams, P: PrimeWindow) -> ExpSumReport:
    """``sum_{l<=L} |sum_{q_1..q_n in P} e(l q_1...q_n a/q)|`` with repeats allowed."""
    return _pattern_report(p, P, (1,) * p.n, "lemma1")


def lemma2_lhs(p: ExpSumParams, P: PrimeWindow) -> ExpSumReport:
    """Same as :func:`lemma1_lhs` with ``q_i`` raised to ``pattern[i]``."""
    if p.pattern is None:
        raise InvalidInput("lemma2_lhs needs an exponent pattern")
    return _pattern_report(p, P, p.pattern, "lemma2")


def distinct_threshold(size: int, n: int, binomial: bool = False) -> float:
    """``(|P|^n - c |P|^(n-1)) / 6`` with ``c = n^2``, or ``C(n, 2)`` if ``binomial``."""
    c = math.comb(n, 2) if binomial else n * n
    return (size**n - c * size ** (n - 1)) / 6


def distinct_histogram(a: int, q: int, n: int, P: PrimeWindow | Sequence[int], budget: int | None = None) -> np.ndarray:
    """Residue counts of ``a * q_1...q_n`` over tuples of *distinct* primes.

    Obtained by Möbius inversion over set partitions: every partition
    contributes the histogram for its merged exponent pattern.
    """
    size = len(P)
    check_budget(bell(n) * n * q * max(size, 1), budget, "distinct histogram")
    # signed weights up to n! can push the combination past int64
    wide = max(size, 1) ** n * math.factorial(n) * bell(n) >= 2**62

    def restricted(part):
        counts = product_residue_histogram(P, part.block_sizes, a, q).counts
        return counts.astype(object) if wide else counts

    return inversion_combine(n, restricted)


def distinct_sum_S(
    a: int,
    q: int,
    n: int,
    L: int,
    P: PrimeWindow,
    *,
    binomial: bool = False,
    cross_check: bool = False,
    budget: int | None = None,
) -> ExpSumReport:
    """``sum_{l<=L} |sum_{distinct q_1..q_n in P} e(l q_1...q_n a/q)|``.

    With ``cross_check`` the value is recomputed by direct enumeration when
    ``|P|^n <= 10**6`` and an ``AssertionError`` is raised on disagreement.
    """
    if math.gcd(a, q) != 1:
        raise InvalidInput(f"gcd(a, q) must be 1, got a={a}, q={q}")
    counts = distinct_histogram(a, q, n, P, budget)
    lhs = grouped_l_sum(counts, q, L)
    size = len(P)
    threshold = distinct_threshold(size, n, binomial)
    if cross_check and size**n <= 10**6:
        direct = direct_exponential_sum(a, q, (1,) * n, L, P, distinct=True)
        tol = 1e-8 * max(abs(direct), 1.0)
        assert abs(direct - lhs) <= tol, f"grouped {lhs} != direct {direct}"
    distinct_count = math.perm(size, n) if size >= n else 0
    N = P.N if isinstance(P, PrimeWindow) else max(P, default=0)
    return ExpSumReport(
        lhs=lhs,
        rhs_bound=threshold,
        ratio=lhs / threshold if threshold > 0 else math.inf,
        condition_ok=lhs <= threshold,
        term_count=L * distinct_count,
        float_error_bound=_float_error_bound(counts, q, L),
        kind="distinct",
        params={"a": a, "q": q, "n": n, "L": L, "N": N, "binomial": binomial},
    )


def direct_exponential_sum(
    a: int,
    q: int,
    pattern: Sequence[int],
    L: int,
    P: PrimeWindow | Sequence[int],
    distinct: bool = False,
) -> float:
    """Term-by-term evaluation over every tuple; the reference for the grouped path."""
    primes = list(P)
    m = len(pattern)
    tuples = itertools.permutations(primes, m) if distinct else itertools.product(primes, repeat=m)
    residues = np.array(
        [a * math.prod(p**r for p, r in zip(t, pattern)) % q for t in tuples], dtype=np.int64
    )
    total = 0.0
    for l in range(1, L + 1):
        phases = 2 * np.pi * ((l * residues) % q) / q
        total += abs(np.exp(1j * phases).sum())
    return float(total)


# -- combinatorial audits -----------------------------------------------------


def dr_coefficients(L: int, P: PrimeWindow | Sequence[int], k: int, budget: int | None = None) -> Counter:
    """``d_r = #{(l, q_1..q_k): l <= L, q_i in P, l q_1...q_k = r}``."""
    primes = list(P)
    check_budget(L * max(len(primes), 1) ** k, budget, "d_r enumeration")
    d = Counter(range(1, L + 1))
    for _ in range(k):
        nxt: Counter = Counter()
        for r, c in d.items():
            for p in primes:
                nxt[r * p] += c
        d = nxt
    return d


def dr_coefficient_audit(L: int, P: PrimeWindow | Sequence[int], k: int, n: int, budget: int | None = None) -> DrAudit:
    """Compare ``max_r d_r`` with ``2^(n+k+1) k^k`` (``0^0 = 1``)."""
    d = dr_coefficients(L, P, k, budget)
    max_dr = max(d.values(), default=0)
    bound = 2 ** (n + k + 1) * k**k
    return DrAudit(max_dr, bound, max_dr <= bound)


def vinogradov_sum(a: int, q: int, N: int) -> VinogradovResult:
    """``sum_{r=1}^{q} min(N, 1/||a r / q||)`` exactly, against ``N + 2q(1 + ln q)``.

    The ``r`` with ``a r = 0 mod q`` contributes ``N``.
    """
    if q < 1 or N < 1 or math.gcd(a, q) != 1:
        raise InvalidInput(f"need q, N >= 1 and gcd(a, q) = 1, got a={a}, q={q}, N={N}")
    by_dist = Counter(min(t, q - t) for t in ((a * r) % q for r in range(1, q + 1)))
    lhs = Fraction(0)
    for s, count in by_dist.items():
        term = Fraction(N) if s == 0 else min(Fraction(N), Fraction(q, s))
        lhs += count * term
    bound = N + 2 * q * (1 + math.log(q))
    return VinogradovResult(lhs, bound, float(lhs) / bound)


def erdos_turan_sum(points: Sequence[Fraction], L: int) -> float:
    """``sum_{l=1}^{L} |sum_j e(l x_j)|`` with each phase reduced exactly mod 1."""
    if not points:
        return 0.0
    nums = [x.numerator for x in points]
    dens = [x.denominator for x in points]
    if max(dens) * L * max(1, max(abs(v) for v in nums)) < 2**62:
        nums_a = np.array(nums, dtype=np.int64)
        dens_a = np.array(dens, dtype=np.int64)
        total = 0.0
        for l in range(1, L + 1):
            phases = ((l * nums_a) % dens_a) / dens_a
            total += abs(np.exp(2j * np.pi * phases).sum())
        return float(total)
    total = 0.0
    for l in range(1, L + 1):
        phases = np.array([(l * u % v) / v for u, v in zip(nums, dens)])
        total += abs(np.exp(2j * np.pi * phases).sum())
    return float(total)


def erdos_turan_check(points: Sequence[Fraction], L: int) -> ErdosTuranResult:
    """If ``S <= J/6`` some point has ``||x_j|| < 1/L``; ``conclusion`` records ``S <= J/6``."""
    if L < 1:
        raise InvalidInput("L must be >= 1")
    points = [Fraction(x) for x in points]
    S = erdos_turan_sum(points, L)
    threshold = len(points) / 6
    return ErdosTuranResult(S, threshold, S <= threshold)


def min_distance(points: Sequence[Fraction]) -> Fraction:
    return min(dist_nearest_int(Fraction(x)) for x in points)
