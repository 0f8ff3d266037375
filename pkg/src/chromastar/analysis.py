"""Closed-form predictions and statistics read off a star-basis expansion."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb, prod

from .graph import Forest, deep_vertices, internal_edges, lambda_lc
from .partition import Partition, multiset_diff
from .starcsf import StarPoly

__all__ = [
    "LeadingTerm",
    "AdjacencyRecord",
    "leading_term",
    "lambda_lc",
    "predicted_leading_coeff",
    "deep_count_from_lead",
    "predicted_hook_coeff",
    "adjacency_multiset",
    "multiset_diff",
    "adjacency_records",
    "n_p",
    "n_p_table",
    "is_proper",
]


@dataclass(frozen=True)
class LeadingTerm:
    partition: Partition
    coeff: int


@dataclass(frozen=True)
class AdjacencyRecord:
    mu: Partition
    coeff: int
    e_mu: Counter

    def e_mu_sorted(self) -> Partition:
        return Partition.from_parts(self.e_mu.elements())


def leading_term(f: StarPoly) -> LeadingTerm:
    lam, c = f.leading()
    return LeadingTerm(lam, c)


def predicted_leading_coeff(F: Forest) -> int:
    """``(-1)^m`` times the product of ``deg(u) - 1`` over the ``m`` deep vertices."""
    deep = deep_vertices(F)
    return (-1) ** len(deep) * prod(F.degree(u) - 1 for u in deep)


def deep_count_from_lead(lam: Partition) -> int:
    return Partition(lam).multiplicity(1)


def predicted_hook_coeff(T: Forest, m: int) -> int:
    """Coefficient of ``(n-m, 1^m)`` in a tree's expansion: ``(-1)^m C(#I, m)``."""
    n = T.n_vertices
    if not 0 <= m <= n - 2:
        raise ValueError(f"m must lie in 0..{n - 2}, got {m}")
    return (-1) ** m * comb(len(internal_edges(T)), m)


def is_proper(F: Forest) -> bool:
    """A forest without deep vertices."""
    return not deep_vertices(F)


def adjacency_multiset(lam: Partition) -> Counter:
    """The parts of a partition as a multiset."""
    return Counter(lam)


def adjacency_records(f: StarPoly, k: int = 1, no_ones: bool = True) -> list[AdjacencyRecord]:
    """Records ``(mu, c_mu, E_mu)`` for ``mu`` of length ``len(lead) - k``.

    ``E_mu`` is the multiset of lead parts not matched by parts of ``mu``.
    With ``no_ones`` only partitions without a part 1 are kept.  ``k = 0``
    gives the single record of the leading partition itself.
    """
    if f.is_zero():
        raise ValueError("zero polynomial has no adjacency records")
    if k < 0:
        raise ValueError("k must be non-negative")
    lead, lc = f.leading()
    if k == 0:
        return [AdjacencyRecord(lead, lc, Counter())]
    a_lead = adjacency_multiset(lead)
    target = len(lead) - k
    out = []
    for mu, c in f.items():
        if len(mu) != target or (no_ones and 1 in mu):
            continue
        out.append(AdjacencyRecord(mu, c, multiset_diff(a_lead, adjacency_multiset(mu))))
    return out


def n_p(f: StarPoly, p: int) -> int:
    """``sum over 1-edge no-ones records of m_E(p) * c_mu``."""
    lead, _ = f.leading()
    if p not in lead:
        raise ValueError(f"{p} is not a part of the leading partition {list(lead)}")
    return sum(r.e_mu[p] * r.coeff for r in adjacency_records(f, 1))


def n_p_table(f: StarPoly) -> dict[int, int]:
    lead, _ = f.leading()
    return {p: n_p(f, p) for p in sorted(set(lead), reverse=True)}
