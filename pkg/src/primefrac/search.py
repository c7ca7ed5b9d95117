"""Constructive n-fraction approximations with exact certificates.

Given a hypothesis approximation ``|alpha - a/q| <= 1/(q N^phi)``, the
searchers look for distinct primes ``q_1 < ... < q_n`` from the window such
that ``||q_1...q_n a/q||`` is below ``1/L``, then write the nearest fraction
``b/(q_1...q_n)`` as ``sum a_i/q_i``. The error against ``alpha`` is always
recomputed exactly, and ``met_target`` is an exact rational comparison.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .budget import check_budget
from .errors import InvalidInput, WindowTooSmall
from .exact import (
    as_rational,
    best_single_approx,
    crt_partial_fractions,
    dist_nearest_int,
    floor_scaled_power,
    format_rational,
    le_power,
    nearest_int,
    power_bounds,
)
from .primes import PrimeWindow, omega, sieve_window

THEOREM1 = "theorem1"
THEOREM2 = "theorem2"

TRIVIAL_CASE = "trivial_case"
ET_SEARCH = "et_search"
EXHAUSTED = "exhausted"
ORACLE = "oracle"


@dataclass(frozen=True)
class SearchParams:
    alpha: Fraction
    a: int
    q: int
    N: int
    n: int
    epsilon: Fraction
    phi: Fraction
    mode: str = THEOREM1

    def __post_init__(self):
        for name in ("alpha", "epsilon", "phi"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.q < 1 or math.gcd(self.a, self.q) != 1:
            raise InvalidInput(f"need q >= 1 and gcd(a, q) = 1, got a={self.a}, q={self.q}")
        if self.N < 2 or self.n < 1:
            raise InvalidInput(f"need N >= 2 and n >= 1, got N={self.N}, n={self.n}")
        if self.epsilon <= 0:
            raise InvalidInput("epsilon must be positive")
        if not Fraction(self.n, 2) <= self.phi <= self.n:
            raise InvalidInput(f"phi={self.phi} outside [n/2, n] for n={self.n}")
        if self.mode not in (THEOREM1, THEOREM2):
            raise InvalidInput(f"unknown mode {self.mode!r}")
        if self.mode == THEOREM2:
            if self.n != 3:
                raise InvalidInput("theorem2 mode needs n = 3")
            if not Fraction(3, 2) <= self.phi <= 2:
                raise InvalidInput("theorem2 mode needs 3/2 <= phi <= 2")
        # |alpha - a/q| <= 1/(q N^phi)  <=>  q |alpha - a/q| <= N^(-phi)
        if not le_power(self.q * abs(self.alpha - Fraction(self.a, self.q)), self.N, -self.phi):
            raise InvalidInput(
                f"hypothesis fails: |alpha - {self.a}/{self.q}| > 1/(q N^{self.phi})"
            )

    @property
    def hypothesis(self) -> Fraction:
        return Fraction(self.a, self.q)


@dataclass(frozen=True)
class ApproxResult:
    alpha: Fraction
    denominators: tuple[int, ...]
    numerators: tuple[int, ...]
    error: Fraction
    target_bound: Fraction | None
    L: int | None
    met_target: bool
    branch: str
    hypothesis: tuple[int, int] | None = None
    s0_gap: Fraction | None = None
    skipped: int = 0
    scanned: int = 0

    @property
    def value(self) -> Fraction:
        return sum((Fraction(a, q) for a, q in zip(self.numerators, self.denominators)), Fraction(0))

    def recompute_error(self) -> Fraction:
        return abs(self.alpha - self.value)

    def is_sound(self) -> bool:
        """Stored error and met_target agree with an exact recomputation."""
        err = self.recompute_error()
        met = self.target_bound is not None and err <= self.target_bound
        return err == self.error and met == self.met_target

    def to_dict(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "denominators": list(self.denominators),
            "numerators": list(self.numerators),
            "error": format_rational(self.error),
            "target_bound": None if self.target_bound is None else format_rational(self.target_bound),
            "L": self.L,
            "met_target": self.met_target,
            "branch": self.branch,
            "hypothesis": None if self.hypothesis is None else f"{self.hypothesis[0]}/{self.hypothesis[1]}",
            "s0_gap": None if self.s0_gap is None else format_rational(self.s0_gap),
            "skipped": self.skipped,
            "scanned": self.scanned,
        }


def kappa(n: int) -> Fraction:
    """``3n/4 - (floor(n/3) + 1)/4``."""
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    return Fraction(3 * n - n // 3 - 1, 4)


def n_bound_check(n: int, N: int, epsilon) -> bool:
    """Whether ``n <= eps ln N / (6 ln ln N)``. Advisory only.

    Below ``N = 16`` a warning marks the small-N regime; when ``ln ln N <= 0``
    the answer is ``False``.
    """
    if N < 16:
        warnings.warn(f"small-N regime: N={N} < 16", stacklevel=2)
    lnN = math.log(N)
    if lnN <= 1:
        return False
    return n <= float(epsilon) * lnN / (6 * math.log(lnN))


def choose_L(q: int, N: int, phi, n: int) -> int:
    """``floor(q N^(phi - n)) + 1`` computed exactly."""
    if q < 1 or N < 1 or n < 1:
        raise InvalidInput("choose_L needs positive inputs")
    return floor_scaled_power(q, N, as_rational(phi) - n) + 1


def target_bound(q: int, N: int, exponent) -> Fraction:
    """A rational at most ``1/(q N^exponent)``, equal to it when ``N^exponent`` is rational."""
    _, hi = power_bounds(N, as_rational(exponent))
    return 1 / (q * hi)


def combine_fractions(parts: Iterable[tuple[int, int]]) -> tuple[int, int]:
    total = sum((Fraction(a, q) for a, q in parts), Fraction(0))
    return total.numerator, total.denominator


def numerators_for_coprime(b: int, denoms: Sequence[int]) -> tuple[int, ...]:
    """Integers ``a_i`` with ``sum a_i/q_i = b/prod(q_i)``; integer part goes to ``a_1``."""
    dec = crt_partial_fractions(b, denoms)
    nums = list(dec.numerators)
    if nums:
        nums[0] += dec.integer_part * denoms[0]
    return tuple(nums)


def _certify(
    alpha: Fraction,
    denoms: Sequence[int],
    b: int,
    bound: Fraction | None,
    L: int | None,
    branch: str,
    hyp: tuple[int, int] | None,
    **extra,
) -> ApproxResult:
    nums = numerators_for_coprime(b, denoms)
    value = sum((Fraction(x, d) for x, d in zip(nums, denoms)), Fraction(0))
    assert value == Fraction(b, math.prod(denoms))
    err = abs(alpha - value)
    s0_gap = None
    if hyp is not None:
        M = math.prod(denoms)
        s0_gap = dist_nearest_int(Fraction(hyp[0] * M, hyp[1])) / M
    return ApproxResult(
        alpha=alpha,
        denominators=tuple(denoms),
        numerators=nums,
        error=err,
        target_bound=bound,
        L=L,
        met_target=bound is not None and err <= bound,
        branch=branch,
        hypothesis=hyp,
        s0_gap=s0_gap,
        **extra,
    )


def trivial_case(
    alpha,
    N: int,
    n: int,
    P: PrimeWindow,
    *,
    bound: Fraction | None = None,
    L: int | None = None,
    hypothesis: tuple[int, int] | None = None,
) -> ApproxResult:
    """Round ``alpha`` to the nearest multiple of ``1/M`` for the ``n`` largest primes.

    The error is at most ``1/(2M) <= 2^(n-1)/N^n``; that is the default
    target bound.
    """
    alpha = as_rational(alpha)
    if len(P) < n:
        raise WindowTooSmall(f"window has {len(P)} primes, need {n}")
    denoms = sorted(P)[-n:]
    M = math.prod(denoms)
    b = nearest_int(alpha * M)
    if bound is None:
        bound = Fraction(2 ** (n - 1), N**n)
    return _certify(alpha, denoms, b, bound, L, TRIVIAL_CASE, hypothesis)


class _Best:
    """Running minimiser of ``||alpha M|| / M``; ties go to smaller ``M`` then earlier tuple."""

    def __init__(self, alpha: Fraction):
        self.u, self.v = alpha.numerator, alpha.denominator
        self.key = None
        self.tuple = None

    def offer(self, denoms: tuple[int, ...], M: int) -> None:
        s = self.u * M % self.v
        d = min(s, self.v - s)  # error = d / (v M)
        if self.key is None:
            better = True
        else:
            bd, bM = self.key
            lhs, rhs = d * bM, bd * M
            better = lhs < rhs or (lhs == rhs and M < bM)
        if better:
            self.key = (d, M)
            self.tuple = denoms


def _scan(
    p: SearchParams,
    candidates: Iterator[tuple[int, ...]],
    L: int,
    stop_early: bool,
) -> tuple[tuple[int, ...] | None, _Best, int]:
    best = _Best(p.alpha)
    hit = None
    scanned = 0
    for denoms in candidates:
        scanned += 1
        M = math.prod(denoms)
        t = p.a * M % p.q
        if stop_early and min(t, p.q - t) * L < p.q:
            hit = denoms
            break
        best.offer(denoms, M)
    return hit, best, scanned


def _finish(p: SearchParams, hit, best: _Best, scanned: int, L: int, bound: Fraction, skipped: int) -> ApproxResult:
    hyp = (p.a, p.q)
    if hit is not None:
        M = math.prod(hit)
        b = nearest_int(Fraction(p.a * M, p.q))
        return _certify(p.alpha, hit, b, bound, L, ET_SEARCH, hyp, skipped=skipped, scanned=scanned)
    if best.tuple is None:
        raise WindowTooSmall("no admissible denominator tuple in the window")
    M = math.prod(best.tuple)
    b = nearest_int(p.alpha * M)
    return _certify(p.alpha, best.tuple, b, bound, L, EXHAUSTED, hyp, skipped=skipped, scanned=scanned)


def theorem1_search(
    p: SearchParams, P: PrimeWindow, *, stop_early: bool = True, budget: int | None = None
) -> ApproxResult:
    """Search ``n`` distinct primes of ``P`` for a good ``b/(q_1...q_n)``.

    Tuples are visited in lexicographic order and the scan stops at the
    first one with ``||q_1...q_n a/q|| < 1/L``, where ``L`` is chosen at
    exponent ``phi - epsilon/2``. If none qualifies (or ``stop_early`` is
    off) the whole window is scanned and the tuple with the smallest exact
    error against ``alpha`` is returned, rounded against ``alpha`` itself.
    When ``q <= N^(n - phi)`` the trivial rounding construction is used.

    ``P`` is used as given; pass ``sieve_window(N, q)`` for the window that
    leaves out the prime divisors of ``q``.
    """
    if p.mode != THEOREM1:
        raise InvalidInput("theorem1_search needs mode='theorem1'")
    if len(P) < p.n:
        raise WindowTooSmall(f"window has {len(P)} primes, need {p.n}")
    bound = target_bound(p.q, p.N, p.phi - p.epsilon)
    L = choose_L(p.q, p.N, p.phi - p.epsilon / 2, p.n)
    if le_power(p.q, p.N, p.n - p.phi):
        return trivial_case(p.alpha, p.N, p.n, P, bound=bound, L=L, hypothesis=(p.a, p.q))
    check_budget(math.comb(len(P), p.n), budget, "theorem1 scan")
    candidates = itertools.combinations(sorted(P), p.n)
    hit, best, scanned = _scan(p, candidates, L, stop_early)
    return _finish(p, hit, best, scanned, L, bound, 0)


def theorem2_candidates(P: PrimeWindow, N: int, skipped: list) -> Iterator[tuple[int, int, int]]:
    """``(q_1, q_2, q_3)`` with ``q_1 < q_2`` in ``P`` and ``q_3`` any integer in ``[N/2, N]``.

    ``q_3`` must differ from ``q_1, q_2`` and be coprime to ``q_1 q_2``;
    coprimality failures are counted in ``skipped[0]``.
    """
    lo = -(-N // 2)
    for q1, q2 in itertools.combinations(sorted(P), 2):
        for q3 in range(lo, N + 1):
            if q3 == q1 or q3 == q2:
                continue
            if q3 % q1 == 0 or q3 % q2 == 0:
                skipped[0] += 1
                continue
            yield (q1, q2, q3)


def theorem2_search(
    p: SearchParams, P: PrimeWindow, *, stop_early: bool = True, budget: int | None = None
) -> ApproxResult:
    """Three-term variant: two primes from ``P`` and one free integer in ``[N/2, N]``."""
    if p.mode != THEOREM2:
        raise InvalidInput("theorem2_search needs mode='theorem2'")
    if len(P) < 2:
        raise WindowTooSmall(f"window has {len(P)} primes, need 2")
    bound = target_bound(p.q, p.N, p.phi - p.epsilon)
    L = choose_L(p.q, p.N, p.phi - p.epsilon / 2, 3)
    if le_power(p.q, p.N, 3 - p.phi):
        return trivial_case(p.alpha, p.N, 3, P, bound=bound, L=L, hypothesis=(p.a, p.q))
    check_budget(math.comb(len(P), 2) * (p.N // 2 + 1), budget, "theorem2 scan")
    skipped = [0]
    hit, best, scanned = _scan(p, theorem2_candidates(P, p.N, skipped), L, stop_early)
    return _finish(p, hit, best, scanned, L, bound, skipped[0])


def hypothesis_for(alpha: Fraction, N: int, phi) -> tuple[int, int]:
    """Best convergent ``a/q`` with ``q <= N^phi``; it satisfies the search hypothesis at ``phi``."""
    X = floor_scaled_power(1, N, as_rational(phi))
    return best_single_approx(alpha, max(X, 1))


def search_window(N: int, q: int, exclude_divisors: bool = True) -> PrimeWindow:
    return sieve_window(N, q if exclude_divisors else 1)


def corollary2_probe(
    alpha,
    a: int,
    q: int,
    X: int,
    n: int,
    epsilon,
    *,
    exclude_divisors: bool = True,
    budget: int | None = None,
) -> dict:
    """Turn an approximation with denominator ``<= X`` into one with ``omega(Q) = n``.

    ``N`` is the largest integer with ``N^kappa(n) <= X``, so the hypothesis
    carries over at exponent ``kappa(n)`` and ``Q <= N^n <= X^(n/kappa(n))``.
    """
    alpha, epsilon = as_rational(alpha), as_rational(epsilon)
    if q < 1 or q > X or math.gcd(a, q) != 1:
        raise InvalidInput(f"need 1 <= q <= X and gcd(a, q) = 1, got a={a}, q={q}, X={X}")
    if abs(alpha - Fraction(a, q)) * q * X > 1:
        raise InvalidInput("hypothesis |alpha - a/q| <= 1/(qX) fails")
    k = kappa(n)
    N = floor_scaled_power(1, X, 1 / k)
    if N < 2:
        raise WindowTooSmall(f"X={X} gives N={N} < 2")
    params = SearchParams(alpha, a, q, N, n, epsilon, k)
    result = theorem1_search(params, search_window(N, q, exclude_divisors), budget=budget)
    A, Q = combine_fractions(zip(result.numerators, result.denominators))
    bound = target_bound(q, X, 1 - epsilon)
    err = abs(alpha - Fraction(A, Q))
    return {
        "alpha": format_rational(alpha),
        "a": a,
        "q": q,
        "X": X,
        "n": n,
        "epsilon": format_rational(epsilon),
        "kappa": format_rational(k),
        "N": N,
        "A": A,
        "Q": Q,
        "omega": _omega_of_sum(Q, result),
        "Q_within_bound": le_power(Q, X, n / k),
        "error": format_rational(err),
        "target_bound": format_rational(bound),
        "met_target": err <= bound,
        "branch": result.branch,
        "result": result,
    }


def _omega_of_sum(Q: int, result: ApproxResult) -> int:
    if Q <= 10**18:
        return omega(Q)
    # distinct prime denominators: a prime survives reduction iff its numerator is nonzero mod it
    return sum(1 for a, d in zip(result.numerators, result.denominators) if a % d)


def default_phi_grid(n: int, step=Fraction(1, 8), extra: Iterable = ()) -> list[Fraction]:
    lo, hi = Fraction(n, 2), Fraction(n)
    grid = set()
    x = lo
    while x <= hi:
        grid.add(x)
        x += step
    grid.update(as_rational(v) for v in extra if lo <= as_rational(v) <= hi)
    return sorted(grid)


def conjecture_scan(
    alphas: Sequence,
    N_values: Sequence[int],
    n: int,
    epsilon,
    phi_grid: Sequence | None = None,
    *,
    exclude_divisors: bool = True,
    budget: int | None = None,
) -> list[dict]:
    """Empirical exponents: for each ``(alpha, N)`` the largest grid ``phi`` whose target was met.

    One row per ``(alpha, N, phi)``; every row of a group carries the
    group's ``empirical_phi`` (``None`` if no grid point succeeded). This is
    a measurement, not a claim about any conjectured exponent.
    """
    epsilon = as_rational(epsilon)
    k = kappa(n)
    grid = sorted(as_rational(x) for x in phi_grid) if phi_grid is not None else default_phi_grid(n, extra=(k, k - epsilon))
    rows = []
    for alpha in alphas:
        alpha = as_rational(alpha)
        for N in N_values:
            group = []
            for phi in grid:
                a, q = hypothesis_for(alpha, N, phi)
                params = SearchParams(alpha, a, q, N, n, epsilon, phi)
                res = theorem1_search(params, search_window(N, q, exclude_divisors), budget=budget)
                group.append({"alpha": alpha, "a": a, "q": q, "N": N, "n": n, "phi": phi, "epsilon": epsilon, "result": res})
            met = [row["phi"] for row in group if row["result"].met_target]
            emp = max(met) if met else None
            for row in group:
                row["empirical_phi"] = emp
            rows.extend(group)
    return rows
