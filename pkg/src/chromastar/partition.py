"""Integer partitions as weakly decreasing tuples, with lexicographic order.

A :class:`Partition` is a ``tuple`` subclass, so it hashes and compares
like the plain tuple of its parts.  For partitions of the same integer,
Python's tuple ordering coincides with the lexicographic order used
throughout the package (the first differing part decides), because a
proper prefix can never have the same weight.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Iterator


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()) -> "Partition":
        parts = tuple(parts)
        for x in parts:
            if not isinstance(x, int) or isinstance(x, bool) or x <= 0:
                raise ValueError(f"partition parts must be positive integers, got {x!r}")
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        """Build a partition from parts given in any order."""
        return cls(sorted(parts, reverse=True))

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicity(self, k: int) -> int:
        return self.count(k)

    def counts(self) -> Counter:
        return Counter(self)

    def is_hook(self) -> bool:
        """True for ``(n-m, 1^m)`` with ``m >= 1``."""
        return len(self) > 1 and all(x == 1 for x in self[1:])

    def has_ones(self) -> bool:
        return 1 in self

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    def __str__(self) -> str:
        return format_partition(self)


def lex_cmp(a: Partition, b: Partition) -> int:
    """Three-way lexicographic comparison of two partitions of the same integer."""
    if sum(a) != sum(b):
        raise ValueError(f"cannot compare partitions of different weight: {a} vs {b}")
    a, b = tuple(a), tuple(b)
    return (a > b) - (a < b)


def sort_concat(*parts: Iterable[int]) -> Partition:
    """Sorted multiset union of the given part sequences."""
    merged: list[int] = []
    for p in parts:
        merged.extend(p)
    return Partition.from_parts(merged)


def remove_parts(lam: Iterable[int], drop: Iterable[int]) -> Partition:
    """Multiset difference ``lam - drop``; every dropped part must be present."""
    left = Counter(lam)
    for x in drop:
        if left[x] == 0:
            raise ValueError(f"part {x} not available in {tuple(lam)}")
        left[x] -= 1
    return Partition.from_parts(left.elements())


def merge_parts(lam: Iterable[int], a: int, b: int) -> Partition:
    """Replace one part ``a`` and one part ``b`` of ``lam`` by a single part ``a + b``."""
    return sort_concat(remove_parts(lam, (a, b)), (a + b,))


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` in lexicographically increasing order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        yield Partition()
        return
    out: list[Partition] = []

    def rec(rest: int, cap: int, acc: list[int]) -> None:
        if rest == 0:
            out.append(Partition(acc))
            return
        for x in range(min(rest, cap), 0, -1):
            acc.append(x)
            rec(rest - x, x, acc)
            acc.pop()

    rec(n, n, [])
    # rec produces decreasing lex order
    yield from reversed(out)


def partition_count(n: int) -> int:
    """The number of partitions of ``n``, via Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


_PART_TOKEN = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_partition(text: str) -> Partition:
    """Parse ``[3,2^2,1^3]`` style text (brackets and parentheses optional)."""
    s = text.strip()
    if s[:1] in "[(" and s[-1:] in "])":
        s = s[1:-1]
    if not s.strip():
        return Partition()
    parts: list[int] = []
    for tok in s.split(","):
        m = _PART_TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad partition token {tok!r} in {text!r}")
        value, exp = int(m.group(1)), int(m.group(2) or 1)
        if value == 0:
            raise ValueError(f"zero part in {text!r}")
        parts.extend([value] * exp)
    for a, b in zip(parts, parts[1:]):
        if a < b:
            raise ValueError(f"partition must be weakly decreasing: {text!r}")
    return Partition(parts)


def format_partition(lam: Iterable[int]) -> str:
    return "[" + ",".join(str(x) for x in lam) + "]"


def multiset_diff(a: Counter, b: Counter) -> Counter:
    """Per-element ``max(0, m_a - m_b)``."""
    return Counter(a) - Counter(b)  # Counter subtraction drops non-positive counts
