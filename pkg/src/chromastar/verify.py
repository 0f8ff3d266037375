"""Exhaustive property checks over all trees on ``n`` vertices.

Each check takes one tree and returns a list of failure messages; the
whole-matrix checks (rank, distinguish) work on all trees at once.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .analysis import lambda_lc, leading_term, predicted_hook_coeff, predicted_leading_coeff
from .graph import (
    Forest,
    canonical_code,
    deep_vertices,
    delete_edge,
    diameter,
    dot_contract,
    enumerate_free_trees,
    internal_edges,
    leaf_components,
    leaf_contract,
)
from .partition import Partition, partition_count, sort_concat
from .reconstruct import reconstruct
from .starcsf import csf_oracle, star_expand
from .subspace import check_length_sums, csf_matrix, exact_rank, star_vector

__all__ = [
    "CheckResult",
    "THEOREMS",
    "run_check",
    "random_forest",
    "random_edge_chooser",
    "predicted_lc_after",
    "sign_law_holds",
]


@dataclass
class CheckResult:
    theorem: str
    n: int
    checked: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"{status}  {self.theorem:<13} n={self.n:<3} {self.checked} trees checked"
        if self.failures:
            msg += f", {len(self.failures)} failure(s)"
        return msg


# -- helpers shared with the tests ------------------------------------------


def random_forest(n: int, rng: random.Random, keep: float = 0.8) -> Forest:
    """A random labeled tree from a Prüfer sequence, each edge kept with probability ``keep``."""
    if n <= 1:
        return Forest(n)
    if n == 2:
        edges = [(0, 1)]
    else:
        seq = [rng.randrange(n) for _ in range(n - 2)]
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(v for v in range(n) if degree[v] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [w for w in range(n) if degree[w] == 1]
        edges.append((u, v))
    return Forest(n, [e for e in edges if rng.random() < keep])


def random_edge_chooser(rng: random.Random) -> Callable[[Forest, set], tuple]:
    def choose(F: Forest, ie: set) -> tuple:
        return rng.choice(sorted(ie))

    return choose


def _component_of(F: Forest, v: int) -> int:
    for c in leaf_components(F):
        if v in c.members:
            return c.order
    raise ValueError(v)


def predicted_lc_after(F: Forest, e: tuple[int, int]) -> dict[str, Partition]:
    """Leaf-component partitions after each operation on internal edge ``e``, by formula."""
    u, v = e
    lam = lambda_lc(F)
    deep = deep_vertices(F)
    ku, kv = _component_of(F, u), _component_of(F, v)
    rest = list(lam)
    rest.remove(ku)
    rest.remove(kv)
    dot = sort_concat(rest, [ku + kv - 1, 1])
    leaf = sort_concat(rest, [ku + kv])
    deg2 = [x for x in (u, v) if x in deep and F.degree(x) == 2]
    if not deg2:
        dele = lam
    else:
        parts = list(lam)
        for x in deg2:
            parts.remove(1)
        grow = []
        for x in deg2:
            (t,) = [w for w in F.neighbors(x) if w not in (u, v)]
            grow.append(_component_of(F, t))
        for k in grow:
            parts.remove(k)
        dele = sort_concat(parts, [k + 1 for k in grow])
    return {"L": dele, "M": dot, "R": leaf}


# -- per-tree checks ----------------------------------------------------------


def _check_leading(T: Forest, seed: int) -> list[str]:
    lt = leading_term(star_expand(T))
    if lt.partition != lambda_lc(T):
        return [f"{T}: leading {list(lt.partition)} != leaf components {list(lambda_lc(T))}"]
    return []


def _check_lead_coeff(T: Forest, seed: int) -> list[str]:
    lt = leading_term(star_expand(T))
    want = predicted_leading_coeff(T)
    return [] if lt.coeff == want else [f"{T}: leading coefficient {lt.coeff} != {want}"]


def _check_hooks(T: Forest, seed: int) -> list[str]:
    f = star_expand(T)
    n = T.n_vertices
    out = []
    for m in range(0, n - 1):
        lam = Partition([n - m] + [1] * m)
        if f.coefficient(lam) != predicted_hook_coeff(T, m):
            out.append(f"{T}: hook m={m} gives {f.coefficient(lam)}")
    return out


def sign_law_holds(F: Forest) -> bool:
    """Each coefficient has sign ``(-1)^(m_1(lambda) - isolated(F))``."""
    iso = F.isolated_count()
    return all((c > 0) == ((lam.multiplicity(1) - iso) % 2 == 0) for lam, c in star_expand(F).items())


def _check_sign_law(T: Forest, seed: int) -> list[str]:
    return [] if sign_law_holds(T) else [f"{T}: a coefficient has the wrong sign"]


def _check_dnc_identity(T: Forest, seed: int) -> list[str]:
    f = star_expand(T)
    out = []
    for e in sorted(internal_edges(T)):
        rhs = star_expand(delete_edge(T, e)) - star_expand(dot_contract(T, e)) + star_expand(leaf_contract(T, e))
        if rhs != f:
            out.append(f"{T}: relation fails on edge {e}")
    return out


def _check_length_sums(T: Forest, seed: int) -> list[str]:
    out = []
    forests = [T] + [delete_edge(T, e) for e in T.sorted_edges()]
    for F in forests:
        if not check_length_sums(star_expand(F), len(F.components)):
            out.append(f"{F}: length sums do not vanish")
    return out


def _check_monotonic(T: Forest, seed: int) -> list[str]:
    out = []
    lam = lambda_lc(T)
    deep = deep_vertices(T)
    for e in sorted(internal_edges(T)):
        after = {
            "L": lambda_lc(delete_edge(T, e)),
            "M": lambda_lc(dot_contract(T, e)),
            "R": lambda_lc(leaf_contract(T, e)),
        }
        if after != predicted_lc_after(T, e):
            out.append(f"{T}: edge {e} operation formulas disagree")
        if not (lam <= after["L"] and lam <= after["M"] and lam < after["R"]):
            out.append(f"{T}: edge {e} breaks monotonicity")
        deg2_deep = any(x in deep and T.degree(x) == 2 for x in e)
        if (after["L"] == lam) != (not deg2_deep):
            out.append(f"{T}: edge {e} deletion equality case wrong")
        if (after["M"] == lam) != any(x in deep for x in e):
            out.append(f"{T}: edge {e} dot-contraction equality case wrong")
    return out


def _check_reconstruct(T: Forest, seed: int) -> list[str]:
    if diameter(T) > 5:
        return []
    r = reconstruct(star_expand(T))
    if not r.ok or canonical_code(r.tree) != canonical_code(T):
        return [f"{T}: reconstruction failed ({r.reason or 'wrong tree'})"]
    return []


def _check_oracle(T: Forest, seed: int) -> list[str]:
    return [] if star_expand(T) == csf_oracle(T) else [f"{T}: oracle disagrees"]


def _check_edge_order(T: Forest, seed: int) -> list[str]:
    f = star_expand(T)
    rng = random.Random(f"{seed}:{T}")
    out = []
    for i in range(5):
        if star_expand(T, memo=False, choose_edge=random_edge_chooser(rng)) != f:
            out.append(f"{T}: random order {i} differs")
    return out


PER_TREE: dict[str, Callable[[Forest, int], list[str]]] = {
    "dnc-identity": _check_dnc_identity,
    "sign-law": _check_sign_law,
    "hooks": _check_hooks,
    "leading": _check_leading,
    "lead-coeff": _check_lead_coeff,
    "monotonic": _check_monotonic,
    "length-sums": _check_length_sums,
    "reconstruct": _check_reconstruct,
    "oracle": _check_oracle,
    "edge-order": _check_edge_order,
}


# -- whole-n checks -----------------------------------------------------------


def _check_rank(trees: list[Forest]) -> list[str]:
    n = trees[0].n_vertices
    M = csf_matrix(n, trees)
    r, want = exact_rank(M), partition_count(n) - n + 1
    return [] if r == want else [f"rank {r} != {want}"]


def _check_distinguish(trees: list[Forest]) -> list[str]:
    seen: dict[tuple, Forest] = {}
    out = []
    for T in trees:
        v = star_vector(star_expand(T))
        if v in seen:
            out.append(f"{T} and {seen[v]} share a star-vector")
        seen[v] = T
    return out


WHOLE: dict[str, Callable[[list[Forest]], list[str]]] = {
    "rank": _check_rank,
    "distinguish": _check_distinguish,
}

THEOREMS = [
    "dnc-identity",
    "sign-law",
    "hooks",
    "leading",
    "lead-coeff",
    "monotonic",
    "length-sums",
    "rank",
    "reconstruct",
    "distinguish",
    "oracle",
    "edge-order",
]


def _run_one(args: tuple[str, Forest, int]) -> list[str]:
    name, T, seed = args
    return PER_TREE[name](T, seed)


def run_check(name: str, n: int, seed: int = 0, jobs: int = 1, limit: int | None = None) -> CheckResult:
    if name not in THEOREMS:
        raise ValueError(f"unknown theorem id {name!r}")
    trees = enumerate_free_trees(n)
    if limit is not None:
        trees = trees[:limit]
    if name in WHOLE:
        return CheckResult(name, n, len(trees), WHOLE[name](trees))
    tasks = [(name, T, seed) for T in trees]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=8))
    else:
        results = [_run_one(t) for t in tasks]
    failures = [msg for r in results for msg in r]
    return CheckResult(name, n, len(trees), failures)
