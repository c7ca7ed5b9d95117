"""Prime windows ``[N/2, N]`` with the prime divisors of a modulus removed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sympy import primefactors

from .errors import InvalidInput

OMEGA_LIMIT = 10**18


def prime_flags_upto(n: int) -> np.ndarray:
    """Boolean array ``flags`` of length ``n + 1`` with ``flags[i]`` true iff i is prime."""
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return flags


@dataclass(frozen=True)
class PrimeWindow:
    """Primes ``p`` with ``N/2 <= p <= N`` that do not divide ``excluded_modulus``."""

    N: int
    excluded_modulus: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    @property
    def lower(self) -> int:
        return -(-self.N // 2)

    def excluding(self, q: int) -> "PrimeWindow":
        """Same window with the prime divisors of ``q`` also removed."""
        modulus = math.lcm(self.excluded_modulus, q)
        return PrimeWindow(self.N, modulus, tuple(p for p in self.primes if modulus % p))


def sieve_window(N: int, q: int = 1) -> PrimeWindow:
    """Closed window ``ceil(N/2) <= p <= N``; a real ``N`` is floored first."""
    N = math.floor(N)
    if N < 2:
        raise InvalidInput(f"empty prime window for N={N}")
    if q < 1:
        raise InvalidInput(f"excluded modulus must be positive, got {q}")
    flags = prime_flags_upto(N)
    lo = -(-N // 2)
    primes = tuple(int(p) for p in np.flatnonzero(flags[lo:]) + lo if q % int(p))
    return PrimeWindow(N, q, primes)


def window_size_check(window: PrimeWindow) -> bool:
    """``|P| >= N / (3 ln N)``."""
    return len(window) >= window.N / (3 * math.log(window.N))


def omega(Q: int) -> int:
    """Number of distinct prime factors of ``Q``."""
    if Q < 1:
        raise InvalidInput(f"omega needs Q >= 1, got {Q}")
    if Q > OMEGA_LIMIT:
        raise InvalidInput(f"omega is limited to Q <= 10**18, got {Q}")
    return len(primefactors(Q))
