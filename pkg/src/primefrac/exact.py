"""Exact rational arithmetic helpers.

Rationals are plain :class:`fractions.Fraction` objects, which already keep
a reduced form with a positive denominator. This module adds the pieces the
rest of the package needs on top of that: distance to the nearest integer,
continued fractions, CRT partial fractions, and exact integer roots so that
powers ``N**(s/t)`` never go through floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def make_rational(num: int, den: int = 1) -> Fraction:
    """Reduced fraction ``num/den`` with the sign carried by the numerator."""
    if isinstance(num, bool) or isinstance(den, bool):
        raise InvalidInput("booleans are not integers here")
    if not isinstance(num, int) or not isinstance(den, int):
        raise InvalidInput(f"expected integers, got {num!r}/{den!r}")
    if den == 0:
        raise InvalidInput("zero denominator")
    return Fraction(num, den)


def as_rational(x: Fraction | int | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return make_rational(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"-p/q"`` or a plain integer ``"p"``."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise InvalidInput(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    return make_rational(num, den)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def nearest_int(x: Fraction) -> int:
    """Nearest integer to ``x``; exact halves go to the even neighbour."""
    return round(x)


def dist_nearest_int(x: Fraction) -> Fraction:
    """``||x||``, the distance from ``x`` to the closest integer."""
    r = x.numerator % x.denominator
    return Fraction(min(r, x.denominator - r), x.denominator)


# -- continued fractions ----------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    partial_quotients: tuple[int, ...]
    convergents: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.partial_quotients)

    @property
    def value(self) -> Fraction:
        return self.convergents[-1]


def convergents_from_quotients(quotients: Iterable[int]) -> list[Fraction]:
    """Convergents p_k/q_k from the usual three-term recurrence."""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    out = []
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Fraction(p, q))
    return out


def continued_fraction(x: Fraction) -> ContinuedFraction:
    """Finite expansion of ``x`` with last quotient >= 2 (unless length 1)."""
    x = as_rational(x)
    num, den = x.numerator, x.denominator
    quotients = []
    while den:
        a, r = divmod(num, den)
        quotients.append(a)
        num, den = den, r
    return ContinuedFraction(tuple(quotients), tuple(convergents_from_quotients(quotients)))


def best_single_approx(alpha: Fraction, X: int) -> tuple[int, int]:
    """Convergent ``a/q`` of ``alpha`` with the largest denominator ``q <= X``.

    If ``q_next`` is the following convergent denominator then
    ``|alpha - a/q| <= 1/(q * q_next)``; when alpha's own denominator is at
    most ``X`` the result is alpha itself.
    """
    if X < 1:
        raise InvalidInput(f"X must be >= 1, got {X}")
    best = None
    for c in continued_fraction(alpha).convergents:
        if c.denominator > X:
            break
        best = c
    assert best is not None  # first convergent always has denominator 1
    return best.numerator, best.denominator


# -- partial fractions ------------------------------------------------------


@dataclass(frozen=True)
class PartialFractionDecomposition:
    integer_part: int
    terms: tuple[tuple[int, int], ...]

    @property
    def value(self) -> Fraction:
        return self.integer_part + sum((Fraction(a, q) for a, q in self.terms), Fraction(0))

    @property
    def numerators(self) -> list[int]:
        return [a for a, _ in self.terms]

    @property
    def denominators(self) -> list[int]:
        return [q for _, q in self.terms]


def _check_pairwise_coprime(denoms: Sequence[int]) -> None:
    for i, qi in enumerate(denoms):
        if not isinstance(qi, int) or qi < 1:
            raise InvalidInput(f"denominators must be positive integers, got {qi!r}")
        for qj in denoms[i + 1:]:
            if math.gcd(qi, qj) != 1:
                raise InvalidInput(f"denominators {qi} and {qj} are not coprime")


def crt_partial_fractions(b: int, denoms: Sequence[int]) -> PartialFractionDecomposition:
    """Split ``b / prod(denoms)`` into ``integer_part + sum a_i/q_i``.

    Each ``a_i`` lies in ``[0, q_i)``; whatever is left over goes into the
    integer part.
    """
    denoms = list(denoms)
    _check_pairwise_coprime(denoms)
    M = math.prod(denoms)
    terms = []
    acc = 0
    for q in denoms:
        cofactor = M // q
        a = b * pow(cofactor, -1, q) % q if q > 1 else 0
        terms.append((a, q))
        acc += a * cofactor
    whole, rem = divmod(b - acc, M)
    assert rem == 0
    return PartialFractionDecomposition(whole, tuple(terms))


# -- exact powers -----------------------------------------------------------


def iroot(x: int, k: int) -> int:
    """``floor(x ** (1/k))`` for a non-negative integer ``x``."""
    if x < 0:
        raise InvalidInput("iroot of a negative number")
    if k < 1:
        raise InvalidInput("root index must be >= 1")
    if x < 2 or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    g = 1 << -(-x.bit_length() // k)
    while True:
        y = ((k - 1) * g + x // g ** (k - 1)) // k
        if y >= g:
            break
        g = y
    while g**k > x:
        g -= 1
    while (g + 1) ** k <= x:
        g += 1
    return g


def _powered(c: Fraction, N: int, e: Fraction) -> Fraction:
    """``c**t * N**s`` where ``e = s/t``; its t-th root is ``c * N**e``."""
    s, t = e.numerator, e.denominator
    return c**t * Fraction(N) ** s


def floor_scaled_power(c: Fraction | int, N: int, e: Fraction | int) -> int:
    """``floor(c * N**e)`` exactly, for ``c >= 0`` and ``N >= 1``."""
    c, e = Fraction(c), Fraction(e)
    if c < 0 or N < 1:
        raise InvalidInput("floor_scaled_power needs c >= 0 and N >= 1")
    x = _powered(c, N, e)
    return iroot(x.numerator // x.denominator, e.denominator)


def exact_power(N: int, e: Fraction | int) -> Fraction | None:
    """``N**e`` as a Fraction when it is rational, else ``None``."""
    e = Fraction(e)
    x = _powered(Fraction(1), N, e)
    t = e.denominator
    rn, rd = iroot(x.numerator, t), iroot(x.denominator, t)
    if rn**t == x.numerator and rd**t == x.denominator:
        return Fraction(rn, rd)
    return None


def power_bounds(N: int, e: Fraction | int, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= N**e <= hi``, equal when ``N**e`` is rational.

    Otherwise ``hi - lo`` is ``2**-b`` with ``b`` chosen to give at least
    ``bits`` significant bits.
    """
    e = Fraction(e)
    if N < 1:
        raise InvalidInput("power_bounds needs N >= 1")
    exact = exact_power(N, e)
    if exact is not None:
        return exact, exact
    t = e.denominator
    x = _powered(Fraction(1), N, e)
    b = bits + x.denominator.bit_length() // t + 1
    scaled = x * 2 ** (b * t)
    lo = Fraction(iroot(scaled.numerator // scaled.denominator, t), 2**b)
    return lo, lo + Fraction(1, 2**b)


def le_power(x: Fraction | int, N: int, e: Fraction | int) -> bool:
    """Exact test of ``x <= N**e`` for ``x >= 0``."""
    x, e = Fraction(x), Fraction(e)
    if x < 0:
        return True
    s, t = e.numerator, e.denominator
    return x**t <= Fraction(N) ** s
