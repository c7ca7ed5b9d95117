"""Exact optimum over a class of denominator tuples, by brute force.

For fixed denominators the reachable values ``sum a_i/q_i`` are exactly the
multiples of ``1/M`` with ``M = lcm(q_i)``, so the best error is
``||alpha M|| / M`` and only the lcm of a tuple matters. The oracle walks the
tuples, keeps one witness per lcm value and minimises over those.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .budget import check_budget
from .errors import InvalidInput
from .exact import as_rational, dist_nearest_int, nearest_int
from .primes import sieve_window
from .search import ORACLE, ApproxResult, numerators_for_coprime

PRIMES_IN_WINDOW = "primes_in_window"
ALL_UP_TO_N = "all_up_to_N"


@dataclass(frozen=True)
class DenomClass:
    """Tuple universe for the oracle.

    ``primes_in_window``: ``n`` distinct primes in ``[N/2, N]`` not dividing
    ``excluded_modulus``. ``all_up_to_N``: ``n`` integers in ``[1, N]``
    (repeats allowed, taken as non-decreasing tuples).
    """

    kind: str
    N: int
    n: int
    excluded_modulus: int = 1

    def __post_init__(self):
        if self.kind not in (PRIMES_IN_WINDOW, ALL_UP_TO_N):
            raise InvalidInput(f"unknown denominator class {self.kind!r}")
        if self.N < 1 or self.n < 1:
            raise InvalidInput("N and n must be positive")

    def size(self) -> int:
        if self.kind == PRIMES_IN_WINDOW:
            if self.N < 2:
                return 0
            return math.comb(len(sieve_window(self.N, self.excluded_modulus)), self.n)
        return math.comb(self.N + self.n - 1, self.n)

    def tuples(self):
        if self.kind == PRIMES_IN_WINDOW:
            if self.N < 2:
                return iter(())
            return itertools.combinations(sieve_window(self.N, self.excluded_modulus).primes, self.n)
        return itertools.combinations_with_replacement(range(1, self.N + 1), self.n)


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    """``(g, u, v)`` with ``u x + v y = g = gcd(x, y)``."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while y:
        k, r = divmod(x, y)
        x, y = y, r
        u0, u1 = u1, u0 - k * u1
        v0, v1 = v1, v0 - k * v1
    return x, u0, v0


def numerators_for(b: int, denoms: Sequence[int]) -> tuple[int, ...]:
    """Integers ``a_i`` with ``sum a_i/q_i = b/lcm(q_i)``.

    Pairwise coprime denominators go through CRT; otherwise the cofactors
    ``lcm/q_i`` are combined by repeated extended gcd and every ``a_i`` past
    the first is reduced into ``[0, q_i)``, its integer excess moved to ``a_1``.
    """
    denoms = list(denoms)
    if not denoms or any(q < 1 for q in denoms):
        raise InvalidInput("denominators must be positive and nonempty")
    if all(math.gcd(x, y) == 1 for x, y in itertools.combinations(denoms, 2)):
        return numerators_for_coprime(b, denoms)
    M = math.lcm(*denoms)
    cof = [M // q for q in denoms]
    g, coeffs = cof[0], [1]
    for c in cof[1:]:
        g, u, v = _ext_gcd(g, c)
        coeffs = [u * x for x in coeffs] + [v]
    assert g == 1
    nums = [b * x for x in coeffs]
    for i in range(1, len(nums)):
        k, nums[i] = divmod(nums[i], denoms[i])
        nums[0] += k * denoms[0]
    return tuple(nums)


def best_error_for_denoms(alpha, denoms: Sequence[int]) -> tuple[Fraction, tuple[int, ...]]:
    """Smallest ``|alpha - sum a_i/q_i|`` over integer numerators, with a witness."""
    alpha = as_rational(alpha)
    if not denoms:
        raise InvalidInput("denominators must be nonempty")
    M = math.lcm(*denoms)
    b = nearest_int(alpha * M)
    nums = numerators_for(b, denoms)
    return dist_nearest_int(alpha * M) / M, nums


def best_multi_approx(alpha, cls: DenomClass, budget: int | None = None) -> ApproxResult:
    """Global optimum over ``cls``; ties go to the smaller lcm, then the earlier tuple."""
    alpha = as_rational(alpha)
    check_budget(cls.size(), budget, "oracle enumeration")
    witness: dict[int, tuple[int, ...]] = {}
    for t in cls.tuples():
        M = math.lcm(*t)
        if M not in witness:
            witness[M] = t
    if not witness:
        raise InvalidInput(f"denominator class {cls} is empty")
    u, v = alpha.numerator, alpha.denominator
    best_M, best_d = None, None
    for M in sorted(witness):
        s = u * M % v
        d = min(s, v - s)  # error = d / (v M)
        if best_M is None or d * best_M < best_d * M:
            best_M, best_d = M, d
    denoms = witness[best_M]
    err, nums = best_error_for_denoms(alpha, denoms)
    assert err == Fraction(best_d, v * best_M)
    return ApproxResult(
        alpha=alpha,
        denominators=tuple(denoms),
        numerators=nums,
        error=err,
        target_bound=None,
        L=None,
        met_target=False,
        branch=ORACLE,
        scanned=cls.size(),
    )


def achieved_exponent(alpha, a: int, q: int, result: ApproxResult, N: int) -> float:
    """``phi`` with ``error = 1/(q N^phi)``; ``inf`` for an exact hit. Display only."""
    if N < 2:
        raise InvalidInput("achieved_exponent needs N >= 2")
    err = result.error
    if err == 0:
        return math.inf
    # log(1/(q err)) / log N with big-int safe logs
    return (math.log(err.denominator) - math.log(err.numerator) - math.log(q)) / math.log(N)
