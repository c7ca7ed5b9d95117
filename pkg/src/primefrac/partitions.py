"""Set partitions of ``{1..n}`` and Möbius inversion over the partition lattice.

A sum over tuples with pairwise distinct entries is rewritten as a signed
combination of sums in which the indices of each block are forced equal::

    sum_distinct f = sum_S mu(S) * sum_{q_i = q_j for i, j in the same block of S} f

with ``mu(S) = prod_j (-1)**(|P_j| - 1) * (|P_j| - 1)!``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence, TypeVar

from .budget import check_budget
from .errors import InvalidInput

MAX_N = 12

T = TypeVar("T")


@dataclass(frozen=True)
class Partition:
    """Blocks sorted by smallest element, elements sorted inside each block."""

    blocks: tuple[tuple[int, ...], ...]
    mu: int

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def block_of(self) -> tuple[int, ...]:
        """``block_of()[i-1]`` is the block index holding element ``i``."""
        out = [0] * self.n
        for j, block in enumerate(self.blocks):
            for i in block:
                out[i - 1] = j
        return tuple(out)


def mobius_weight(p: Partition | Sequence[Sequence[int]]) -> int:
    blocks = p.blocks if isinstance(p, Partition) else p
    w = 1
    for block in blocks:
        size = len(block)
        w *= (-1) ** (size - 1) * math.factorial(size - 1)
    return w


def partition_from_blocks(blocks: Sequence[Sequence[int]]) -> Partition:
    canon = tuple(sorted(tuple(sorted(b)) for b in blocks))
    elems = [i for b in canon for i in b]
    if any(len(b) == 0 for b in canon) or sorted(elems) != list(range(1, len(elems) + 1)):
        raise InvalidInput(f"not a set partition of 1..n: {blocks!r}")
    return Partition(canon, mobius_weight(canon))


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All ``a`` with ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``, in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[Partition, ...]:
    out = []
    for rgs in restricted_growth_strings(n):
        blocks: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
        for i, b in enumerate(rgs, start=1):
            blocks[b].append(i)
        canon = tuple(tuple(b) for b in blocks)
        out.append(Partition(canon, mobius_weight(canon)))
    return tuple(out)


def enumerate_partitions(n: int) -> list[Partition]:
    if not 1 <= n <= MAX_N:
        raise InvalidInput(f"n must be in 1..{MAX_N}, got {n}")
    return list(_partitions(n))


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def inversion_combine(n: int, restricted: Callable[[Partition], T]) -> T:
    """``sum_S mu(S) * restricted(S)`` over all partitions of ``{1..n}``.

    ``restricted`` may return anything supporting ``+`` and multiplication by
    an int (ints, Fractions, numpy arrays).
    """
    total = None
    for part in enumerate_partitions(n):
        term = part.mu * restricted(part)
        total = term if total is None else total + term
    return total


def restricted_sum(f: Callable[..., T], part: Partition, domain: Sequence) -> T:
    """Sum of ``f`` over tuples whose indices agree inside each block of ``part``."""
    where = part.block_of()
    total = 0
    for values in itertools.product(domain, repeat=len(part.blocks)):
        total = total + f(*(values[j] for j in where))
    return total


def distinct_sum_by_inversion(
    f: Callable[..., T], n: int, domain: Sequence, budget: int | None = None
) -> T:
    """Sum of ``f(x_1..x_n)`` over tuples from ``domain`` with distinct entries."""
    domain = list(domain)
    check_budget(len(domain) ** n * bell(n), budget, "partition inversion")
    return inversion_combine(n, lambda part: restricted_sum(f, part, domain))
