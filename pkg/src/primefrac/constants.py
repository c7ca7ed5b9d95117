"""Named constants as exact convergents, and the alpha string parser."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator

import mpmath

from .errors import InvalidInput
from .exact import continued_fraction, parse_rational


def _golden() -> Iterator[int]:
    return itertools.repeat(1)


def _sqrt2() -> Iterator[int]:
    yield 1
    yield from itertools.repeat(2)


def _e() -> Iterator[int]:
    yield 2
    for k in itertools.count(1):
        yield from (1, 2 * k, 1)


def _pi_quotients(bits: int) -> list[int]:
    """Partial quotients of pi certified by an enclosing dyadic interval."""
    with mpmath.workprec(bits + 64):
        F = int(mpmath.floor(mpmath.ldexp(mpmath.pi, bits)))
    # generous slack so the interval surely contains pi
    lo = continued_fraction(Fraction(F - 1, 1 << bits)).partial_quotients
    hi = continued_fraction(Fraction(F + 2, 1 << bits)).partial_quotients
    common = []
    for x, y in zip(lo, hi):
        if x != y:
            break
        common.append(x)
    # the last shared quotient may still be a truncation artefact
    return common[:-1]


def _convergents(quotients) -> Iterator[Fraction]:
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in quotients:
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        yield Fraction(p0, q0)


_PATTERNS = {"golden": _golden, "sqrt2": _sqrt2, "e": _e}
CONSTANTS = ("golden", "sqrt2", "e", "pi")


def convergent_of(name: str, min_den: int) -> Fraction:
    """First convergent of ``name`` whose denominator is at least ``min_den``."""
    if min_den < 1:
        raise InvalidInput("minimum denominator must be positive")
    if name in _PATTERNS:
        for c in _convergents(_PATTERNS[name]()):
            if c.denominator >= min_den:
                return c
    if name != "pi":
        raise InvalidInput(f"unknown constant {name!r}; expected one of {', '.join(CONSTANTS)}")
    bits = max(256, 4 * min_den.bit_length() + 64)
    while True:
        for c in _convergents(_pi_quotients(bits)):
            if c.denominator >= min_den:
                return c
        bits *= 2


def parse_alpha(text: str) -> Fraction:
    """``"p/q"``, ``"p"`` or ``"convergent:<name>:<min_den>"``."""
    text = text.strip()
    if text.startswith("convergent:"):
        parts = text.split(":")
        if len(parts) != 3 or not parts[2].strip().isdigit():
            raise InvalidInput(f"malformed convergent string {text!r}")
        return convergent_of(parts[1].strip(), int(parts[2]))
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise InvalidInput(f"malformed alpha {text!r}") from exc
