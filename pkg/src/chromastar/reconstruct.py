"""Rebuild a tree from its star-basis expansion.

Each branch proposes candidate trees from the leading partition and a few
coefficients.  A candidate is only accepted once its own expansion equals
the input exactly, so a returned tree is always correct; the structural
arguments only decide which candidates are worth building.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .analysis import adjacency_records, n_p
from .graph import Forest, canonical_code, caterpillar, hub_tree, star, union_all
from .partition import Partition, merge_parts, remove_parts
from .starcsf import StarPoly, exact_divide, st, star_expand

__all__ = [
    "ReconstructionError",
    "AmbiguousReconstruction",
    "ReconstructionResult",
    "BRANCHES",
    "reconstruct",
    "verified_branches",
    "reconstruct_diam4",
    "reconstruct_diam5",
    "solve_product",
    "product_orders",
    "split_product",
    "build_component_tree",
    "two_hub_tree",
]


class ReconstructionError(ValueError):
    """No candidate of a branch reproduces the input."""


class AmbiguousReconstruction(RuntimeError):
    """Two non-isomorphic verified candidates: should be impossible for covered classes."""


class _Decline(Exception):
    pass


@dataclass(frozen=True)
class ReconstructionResult:
    tree: Forest | None
    verified: bool
    branch: str | None = None
    reason: str | None = None
    attempts: tuple = field(default_factory=tuple)  # (branch, outcome) pairs

    @property
    def ok(self) -> bool:
        return self.tree is not None and self.verified

    def to_obj(self) -> dict:
        from .graph import format_tree

        return {
            "outcome": "tree" if self.tree is not None else "unsupported",
            "tree": format_tree(self.tree) if self.tree is not None else None,
            "verified": self.verified,
            "branch": self.branch,
            "reason": self.reason,
            "attempts": [{"branch": b, "outcome": o} for b, o in self.attempts],
        }


# -- builders ----------------------------------------------------------------


def build_component_tree(orders: Sequence[int], joins: Iterable[tuple[int, int]]) -> Forest:
    """Stars of the given orders with an edge between the centers of each joined pair."""
    parts = [star(k) for k in orders]
    offsets, acc = [], 0
    for p in parts:
        offsets.append(acc)
        acc += p.n_vertices
    F = union_all(parts)
    extra = [(offsets[i], offsets[j]) for i, j in joins]
    return Forest(F.n_vertices, list(F.edges) + extra)


def two_hub_tree(p: int, q: int, at_p: Sequence[int], at_q: Sequence[int]) -> Forest:
    """Hubs of orders ``p`` and ``q`` joined by an edge, each carrying its own star list."""
    orders = [p, q] + list(at_p) + list(at_q)
    joins = [(0, 1)]
    joins += [(0, 2 + i) for i in range(len(at_p))]
    joins += [(1, 2 + len(at_p) + i) for i in range(len(at_q))]
    return build_component_tree(orders, joins)


def _hub(order: int, others: Sequence[int]) -> Forest:
    return hub_tree(order, others)


# -- branch candidate generators ------------------------------------------


def _lead(f: StarPoly) -> Partition:
    return f.leading()[0]


def _cands_star(f: StarPoly) -> list[Forest]:
    lam = _lead(f)
    if len(lam) != 1:
        raise _Decline(f"leading partition {list(lam)} has more than one part")
    return [star(lam[0])]


def _cands_bistar(f: StarPoly) -> list[Forest]:
    lam = _lead(f)
    if len(lam) != 2 or lam[1] < 2:
        raise _Decline(f"leading partition {list(lam)} is not two parts above 1")
    return [caterpillar([lam[0], lam[1]])]


def _cands_extended_bistar(f: StarPoly) -> list[Forest]:
    lam = _lead(f)
    big = [x for x in lam if x > 1]
    k = lam.multiplicity(1)
    if len(big) != 2 or k == 0:
        raise _Decline(f"leading partition {list(lam)} is not (i,j,1^k) with k >= 1")
    return [caterpillar([big[0]] + [1] * k + [big[1]])]


def _cands_distinct_parts(f: StarPoly) -> list[Forest]:
    lam = _lead(f)
    if 1 in lam or len(set(lam)) != len(lam) or len(lam) < 2:
        raise _Decline(f"leading partition {list(lam)} is not distinct parts without 1s")
    index = {x: i for i, x in enumerate(lam)}
    joins = []
    for rec in adjacency_records(f, 1):
        ends = sorted(rec.e_mu.elements())
        if len(ends) != 2 or rec.coeff <= 0:
            raise _Decline(f"record {list(rec.mu)} does not describe a single edge")
        joins.extend([(index[ends[0]], index[ends[1]])] * rec.coeff)
    if len(joins) != len(lam) - 1:
        raise _Decline(f"found {len(joins)} adjacencies, need {len(lam) - 1}")
    try:
        return [build_component_tree(list(lam), joins)]
    except ValueError as exc:
        raise _Decline(f"adjacencies do not form a tree: {exc}") from None


def _internal_orders(f: StarPoly) -> list[int]:
    """Parts ``p`` of the leading partition with ``N(p) > m_p``."""
    lam = _lead(f)
    counts = Counter(lam)
    return [p for p in sorted(counts, reverse=True) if n_p(f, p) > counts[p]]


def _cands_diam4(f: StarPoly) -> list[Forest]:
    lam = _lead(f)
    if len(lam) < 3:
        raise _Decline("diameter four needs at least three leaf components")
    m1 = lam.multiplicity(1)
    if m1 == 1:
        return [hub_tree(1, list(remove_parts(lam, [1])))]
    if m1 > 1:
        raise _Decline(f"{m1} deep vertices; diameter four allows at most one")
    hubs = _internal_orders(f)
    if not hubs:
        raise _Decline("no part p with N(p) > m_p")
    return [hub_tree(p, list(remove_parts(lam, [p]))) for p in hubs]


def _count_split(f: StarPoly, p: int, q: int) -> tuple[list[int], list[int]]:
    """Assign the non-hub components to the ``p`` hub or the ``q`` hub (``p != q``)."""
    lam = _lead(f)
    rest = Counter(lam) - Counter([p, q])
    at_p: list[int] = []
    at_q: list[int] = []
    for r in sorted(rest, reverse=True):
        total = rest[r]
        if r == q:
            if p == 1:
                x = f.coefficient(merge_parts(lam, 1, q)) - 1
            else:
                x = total - (f.coefficient(merge_parts(lam, q, q)) if total else 0)
        elif r == p:
            x = f.coefficient(merge_parts(lam, p, p))
        else:
            x = f.coefficient(merge_parts(lam, p, r))
        if not 0 <= x <= total:
            raise _Decline(f"inconsistent count {x} for {total} components of order {r}")
        at_p += [r] * x
        at_q += [r] * (total - x)
    if not at_p or not at_q:
        raise _Decline("a hub received no components")
    return at_p, at_q


def solve_product(f: StarPoly, p: int, q: int) -> StarPoly:
    """``X_{T1} X_{T2}`` for the two sides of the central internal edge.

    ``H`` (a hub of order ``p + q - 1``) and the leaf-contracted tree (a hub
    of order ``p + q``) both carry every other leaf component directly, so
    their expansions are computed from explicit constructions.
    """
    lam = _lead(f)
    others = list(remove_parts(lam, [p, q]))
    if len(others) < 2:
        raise ValueError("diameter five needs at least two components off the central edge")
    H = _hub(p + q - 1, others)
    top = _hub(p + q, others)
    g = f + st(1) * star_expand(H) - star_expand(top)
    product_orders(g)
    return g


def product_orders(g: StarPoly) -> tuple[int, int]:
    """The vertex counts ``(N1, N2)``, ``N1 >= N2``, read from the unique length-2 key."""
    keys = [k for k in g.keys() if len(k) == 2]
    if len(keys) != 1:
        raise ValueError(f"expected exactly one length-2 key, found {len(keys)}")
    return keys[0][0], keys[0][1]


def _side_from_lead(alpha: Partition, p: int | None) -> list[Forest]:
    """Trees of one side, given its leading partition and hub order."""
    if len(alpha) == 1:
        return [star(alpha[0])]
    if len(alpha) == 2:
        return [caterpillar([alpha[0], alpha[1]])]
    if alpha.multiplicity(1) == 1:
        return [hub_tree(1, list(remove_parts(alpha, [1])))]
    hubs = [p] if p is not None else sorted(set(alpha), reverse=True)
    return [hub_tree(h, list(remove_parts(alpha, [h]))) for h in hubs if h in alpha]


def split_product(g: StarPoly, N1: int, N2: int, p: int | None = None) -> tuple[StarPoly, StarPoly]:
    """Recover ``(X_{T1}, X_{T2})`` from their product, ``N1 >= N2``."""
    if N1 < N2 or N1 + N2 != g.degree:
        raise ValueError(f"bad side orders {N1}, {N2} for degree {g.degree}")
    if N1 > N2:
        x2 = {k[1:]: c for k, c in g.items() if k[0] == N1}
        if not x2:
            raise ValueError("no key carries the larger side order")
        X2 = StarPoly(N2, x2)
        return exact_divide(g, X2), X2
    alphas = [k[1:] for k, c in g.items() if k[0] == N1 and c]
    if not alphas:
        raise ValueError("no key carries the side order")
    alpha = Partition(min(alphas))
    for T1 in _side_from_lead(alpha, p):
        X1 = star_expand(T1)
        try:
            X2 = exact_divide(g, X1)
        except ValueError:
            continue
        return X1, X2
    raise ValueError(f"no side tree with leading partition {list(alpha)} divides the product")


def _side_components(X: StarPoly, p: int) -> list[int]:
    lead = _lead(X)
    if len(lead) == 1:
        if p != 1:
            raise _Decline("a star side requires a degree-2 deep hub")
        return [X.degree - 1]
    if p not in lead:
        raise _Decline(f"hub order {p} missing from side lead {list(lead)}")
    return list(remove_parts(lead, [p]))


def _balanced_candidates(f: StarPoly, p: int) -> list[Forest]:
    lam = _lead(f)
    try:
        g = solve_product(f, p, p)
        N1, N2 = product_orders(g)
        X1, X2 = split_product(g, N1, N2, p)
    except ValueError as exc:
        raise _Decline(f"product step failed: {exc}") from None
    at_1, at_2 = _side_components(X1, p), _side_components(X2, p)
    if Counter(at_1) + Counter(at_2) != Counter(lam) - Counter([p, p]):
        raise _Decline("side leading partitions do not cover the leaf components")
    return [two_hub_tree(p, p, at_1, at_2)]


def _cands_diam5(f: StarPoly) -> list[Forest]:
    lam = _lead(f)
    if len(lam) < 4:
        raise _Decline("diameter five needs at least four leaf components")
    m1 = lam.multiplicity(1)
    if m1 > 2:
        raise _Decline(f"{m1} deep vertices; diameter five allows at most two")
    if m1 == 2:
        return _balanced_candidates(f, 1)
    if m1 == 1:
        qs = sorted(
            {x for r in adjacency_records(f, 1) if r.e_mu[1] == 1 and sum(r.e_mu.values()) == 2
             for x in r.e_mu.elements() if x != 1},
            reverse=True,
        )
        out, reasons = [], []
        for q in qs:
            try:
                at_p, at_q = _count_split(f, 1, q)
            except _Decline as exc:
                reasons.append(f"q={q}: {exc}")
                continue
            out.append(two_hub_tree(1, q, at_p, at_q))
        if not out:
            raise _Decline("no deep-vertex neighbour order works: " + "; ".join(reasons or ["no records"]))
        return out
    hubs = _internal_orders(f)
    if len(hubs) == 1:
        return _balanced_candidates(f, hubs[0])
    if len(hubs) == 2:
        p, q = hubs
        at_p, at_q = _count_split(f, p, q)
        return [two_hub_tree(p, q, at_p, at_q)]
    raise _Decline(f"{len(hubs)} parts with N(p) > m_p; diameter five needs one or two")


BRANCHES: dict[str, Callable[[StarPoly], list[Forest]]] = {
    "star": _cands_star,
    "bistar": _cands_bistar,
    "extended-bistar": _cands_extended_bistar,
    "distinct-parts": _cands_distinct_parts,
    "diameter-4": _cands_diam4,
    "diameter-5": _cands_diam5,
}


# -- dispatch ------------------------------------------------------------------


def _verify(f: StarPoly, cands: list[Forest]) -> list[Forest]:
    good = [T for T in cands if T.n_vertices == f.degree and star_expand(T) == f]
    distinct = {canonical_code(T): T for T in good}
    if len(distinct) > 1:
        raise AmbiguousReconstruction(
            f"{len(distinct)} non-isomorphic trees reproduce the same expansion"
        )
    return list(distinct.values())


def _run_branch(name: str, f: StarPoly) -> tuple[Forest | None, str]:
    try:
        cands = BRANCHES[name](f)
    except _Decline as exc:
        return None, f"declined: {exc}"
    good = _verify(f, cands)
    if not good:
        return None, f"{len(cands)} candidate(s), none reproduces the input"
    return good[0], "verified"


def reconstruct(f: StarPoly, branches: Sequence[str] | None = None) -> ReconstructionResult:
    """Try each branch in order and return the first verified tree."""
    names = list(branches) if branches is not None else list(BRANCHES)
    for name in names:
        if name not in BRANCHES:
            raise ValueError(f"unknown branch {name!r}")
    if f.is_zero() or f.degree == 0:
        return ReconstructionResult(None, False, reason="input is zero or of degree zero")
    attempts = []
    for name in names:
        tree, outcome = _run_branch(name, f)
        attempts.append((name, outcome))
        if tree is not None:
            return ReconstructionResult(tree, True, branch=name, attempts=tuple(attempts))
    return ReconstructionResult(
        None, False, reason="no covered tree class reproduces the input", attempts=tuple(attempts)
    )


def verified_branches(f: StarPoly) -> dict[str, Forest]:
    """Every branch that verifies, with its tree; used to check the branches agree."""
    out = {}
    for name in BRANCHES:
        tree, _ = _run_branch(name, f)
        if tree is not None:
            out[name] = tree
    return out


def _single(name: str, f: StarPoly) -> Forest:
    tree, outcome = _run_branch(name, f)
    if tree is None:
        raise ReconstructionError(f"{name}: {outcome}")
    return tree


def reconstruct_diam4(f: StarPoly) -> Forest:
    return _single("diameter-4", f)


def reconstruct_diam5(f: StarPoly) -> Forest:
    return _single("diameter-5", f)
