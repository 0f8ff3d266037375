"""Forests, their structural queries, the three edge operations and tree enumeration.

Vertices are dense 0-based integer labels.  Every operation returns a new
:class:`Forest`; nothing is mutated after construction.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .partition import Partition

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Forest:
    """A simple acyclic graph on vertices ``0..n_vertices-1``."""

    n_vertices: int
    edges: frozenset

    def __init__(self, n_vertices: int, edges: Iterable[Sequence[int]] = ()):
        if n_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        normed = []
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge {u}-{v} out of range for {n_vertices} vertices")
            normed.append(_norm(u, v))
        es = frozenset(normed)
        if len(es) != len(normed):
            raise ValueError("parallel edges are not allowed")
        # union-find acyclicity check
        parent = list(range(n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in sorted(es):
            ru, rv = find(u), find(v)
            if ru == rv:
                raise ValueError(f"edge {u}-{v} closes a cycle")
            parent[ru] = rv
        object.__setattr__(self, "n_vertices", n_vertices)
        object.__setattr__(self, "edges", es)

    # -- basic structure -------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Vertex sets of the connected components, ordered by smallest member."""
        seen = [False] * self.n_vertices
        out = []
        for s in range(self.n_vertices):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.adjacency[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            out.append(tuple(sorted(comp)))
        return tuple(out)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def is_tree(self) -> bool:
        return self.n_vertices >= 1 and self.is_connected()

    def isolated_count(self) -> int:
        return sum(1 for d in self.degrees if d == 0)

    def induced(self, vertices: Iterable[int]) -> "Forest":
        """Induced subforest, relabeled in increasing order of the original labels."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        es = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Forest(len(vs), es)

    def component_forests(self) -> list["Forest"]:
        return [self.induced(c) for c in self.components]

    def __repr__(self) -> str:
        return f"Forest({self.n_vertices}, {self.sorted_edges()})"

    def __str__(self) -> str:
        return format_tree(self)


@dataclass(frozen=True)
class LeafComponent:
    center: int
    members: frozenset
    order: int


# -- structural queries ------------------------------------------------


def internal_edges(F: Forest) -> set[Edge]:
    deg = F.degrees
    return {(u, v) for u, v in F.edges if deg[u] >= 2 and deg[v] >= 2}


def lowest_internal_edge(F: Forest) -> Edge | None:
    deg = F.degrees
    best = None
    for u, v in F.edges:
        if deg[u] >= 2 and deg[v] >= 2 and (best is None or (u, v) < best):
            best = (u, v)
    return best


def leaf_components(F: Forest) -> list[LeafComponent]:
    """Components of ``F`` with its internal edges removed, ordered by center label."""
    deg = F.degrees
    internal = internal_edges(F)
    rest = Forest(F.n_vertices, F.edges - internal)
    out = []
    for comp in rest.components:
        if len(comp) == 1:
            center = comp[0]
        elif len(comp) == 2:
            a, b = comp
            center = a if deg[a] >= deg[b] else b
        else:
            center = next(v for v in comp if rest.degree(v) >= 2)
        out.append(LeafComponent(center, frozenset(comp), len(comp)))
    out.sort(key=lambda c: c.center)
    return out


def lambda_lc(F: Forest) -> Partition:
    """Sorted orders of the leaf components."""
    return Partition.from_parts(c.order for c in leaf_components(F))


def deep_vertices(F: Forest) -> set[int]:
    deg = F.degrees
    return {
        v
        for v in range(F.n_vertices)
        if deg[v] >= 2 and all(deg[w] >= 2 for w in F.adjacency[v])
    }


def _bfs_far(F: Forest, s: int) -> tuple[int, int, list[int]]:
    dist = [-1] * F.n_vertices
    parent = [-1] * F.n_vertices
    dist[s] = 0
    q = deque([s])
    last = s
    while q:
        x = q.popleft()
        last = x
        for y in F.adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                parent[y] = x
                q.append(y)
    return last, dist[last], parent


def diameter(T: Forest) -> int:
    if not T.is_tree():
        raise ValueError("diameter requires a connected, non-empty forest")
    a, _, _ = _bfs_far(T, 0)
    _, d, _ = _bfs_far(T, a)
    return d


def internal_degree(T: Forest, v: int) -> int:
    deg = T.degrees
    return sum(1 for w in T.adjacency[v] if deg[w] >= 2)


def internal_subgraph_vertices(T: Forest) -> set[int]:
    if not T.is_tree():
        raise ValueError("internal subgraph requires a tree")
    deg = T.degrees
    core = {v for v in range(T.n_vertices) if internal_degree(T, v) >= 2}
    leaves = {w for v in core for w in T.adjacency[v] if deg[w] == 1}
    return core | leaves


def internal_subgraph(T: Forest) -> Forest:
    """Induced subgraph on the vertices of internal degree at least 2 and their leaves."""
    return T.induced(internal_subgraph_vertices(T))


# -- edge operations ---------------------------------------------------


def _check_edge(F: Forest, e: Sequence[int]) -> Edge:
    u, v = _norm(*e)
    if (u, v) not in F.edges:
        raise ValueError(f"edge {u}-{v} not in forest")
    return u, v


def delete_edge(F: Forest, e: Sequence[int]) -> Forest:
    u, v = _check_edge(F, e)
    return Forest(F.n_vertices, F.edges - {(u, v)})


def _contract(F: Forest, e: Sequence[int]) -> list[Edge]:
    # merged vertex keeps label u; v disappears and higher labels shift down
    u, v = _check_edge(F, e)

    def relabel(x: int) -> int:
        if x == v:
            x = u
        return x - 1 if x > v else x

    out = set()
    for a, b in F.edges:
        if (a, b) == (u, v):
            continue
        out.add(_norm(relabel(a), relabel(b)))
    return sorted(out)


def leaf_contract(F: Forest, e: Sequence[int]) -> Forest:
    """Contract ``e`` and hang a fresh leaf (label ``n-1``) on the merged vertex."""
    u, _ = _norm(*e)
    es = _contract(F, e)
    n = F.n_vertices
    return Forest(n, es + [(u, n - 1)])


def dot_contract(F: Forest, e: Sequence[int]) -> Forest:
    """Contract ``e`` and add a fresh isolated vertex (label ``n-1``)."""
    es = _contract(F, e)
    return Forest(F.n_vertices, es)


def disjoint_union(F1: Forest, F2: Forest) -> Forest:
    k = F1.n_vertices
    es = list(F1.edges) + [(u + k, v + k) for u, v in F2.edges]
    return Forest(k + F2.n_vertices, es)


def union_all(forests: Iterable[Forest]) -> Forest:
    out = Forest(0)
    for f in forests:
        out = disjoint_union(out, f)
    return out


# -- canonical form ------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonCode:
    code: str

    def __str__(self) -> str:
        return self.code


def tree_centers(T: Forest) -> list[int]:
    """The one or two central vertices of a tree, by repeated leaf stripping."""
    n = T.n_vertices
    if n <= 2:
        return list(range(n))
    deg = list(T.degrees)
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for x in layer:
            for y in T.adjacency[x]:
                deg[y] -= 1
                if deg[y] == 1:
                    nxt.append(y)
        layer = nxt
    return sorted(layer)


def rooted_code(T: Forest, root: int, vertices: set[int] | None = None) -> str:
    """AHU encoding of ``T`` rooted at ``root``, optionally restricted to a vertex set."""
    order, parent = [root], {root: -1}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in T.adjacency[x]:
            if y != parent[x] and (vertices is None or y in vertices):
                parent[y] = x
                order.append(y)
    children: dict[int, list[str]] = {x: [] for x in order}
    code: dict[int, str] = {}
    for x in reversed(order):
        code[x] = "(" + "".join(sorted(children[x])) + ")"
        if parent[x] >= 0:
            children[parent[x]].append(code[x])
    return code[root]


def _component_code(F: Forest, comp: Sequence[int]) -> str:
    if len(comp) == 1:
        return "()"
    sub = F.induced(comp)
    return min(rooted_code(sub, c) for c in tree_centers(sub))


def canonical_code(F: Forest) -> CanonCode:
    codes = sorted(_component_code(F, c) for c in F.components)
    return CanonCode("|".join(codes))


def is_isomorphic(F1: Forest, F2: Forest) -> bool:
    return canonical_code(F1) == canonical_code(F2)


# -- named families --------------------------------------------------------


def star(n: int) -> Forest:
    """``St_n``: vertex 0 joined to ``n-1`` leaves."""
    if n < 1:
        raise ValueError("star needs at least one vertex")
    return Forest(n, [(0, i) for i in range(1, n)])


def path(n: int) -> Forest:
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return Forest(n, [(i, i + 1) for i in range(n - 1)])


def empty_forest(n: int) -> Forest:
    return Forest(n, [])


def star_forest(lam: Iterable[int]) -> Forest:
    return union_all(star(k) for k in lam)


def caterpillar(alpha: Sequence[int]) -> Forest:
    """Spine ``v_1..v_k`` where ``v_i`` carries ``alpha_i - 1`` pendant leaves."""
    alpha = list(alpha)
    if not alpha or any((not isinstance(a, int)) or a < 1 for a in alpha):
        raise ValueError(f"caterpillar sequence must be non-empty positive integers: {alpha}")
    if len(alpha) >= 2 and (alpha[0] == 1 or alpha[-1] == 1):
        raise ValueError(f"caterpillar endpoints must exceed 1: {alpha}")
    k = len(alpha)
    edges = [(i, i + 1) for i in range(k - 1)]
    nxt = k
    for i, a in enumerate(alpha):
        for _ in range(a - 1):
            edges.append((i, nxt))
            nxt += 1
    return Forest(nxt, edges)


def hub_tree(hub_order: int, others: Sequence[int], hub_deep: bool = False) -> Forest:
    """Stars of the given orders whose centers all join one hub.

    The hub is the center of a star of order ``hub_order``.  With
    ``hub_deep`` the hub is a bare vertex (order 1) joined to the others.
    Label 0 is always the hub.
    """
    if hub_deep:
        hub_order = 1
    parts = [star(hub_order)] + [star(k) for k in others]
    F = union_all(parts)
    offsets, acc = [], 0
    for p in parts:
        offsets.append(acc)
        acc += p.n_vertices
    return Forest(F.n_vertices, list(F.edges) + [(0, off) for off in offsets[1:]])


# -- enumeration ---------------------------------------------------------

MAX_ENUMERATION_N = 20


def _levels_to_forest(levels: Sequence[int]) -> Forest:
    stack: list[int] = []
    edges = []
    for i, lv in enumerate(levels):
        del stack[lv:]
        if stack:
            edges.append((stack[-1], i))
        stack.append(i)
    return Forest(len(levels), edges)


def _next_rooted(levels: list[int], p: int | None = None) -> list[int] | None:
    # successor of a canonical level sequence among rooted trees
    if p is None:
        p = len(levels) - 1
        while levels[p] == 1:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while levels[q] != levels[p] - 1:
        q -= 1
    out = list(levels)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


def _split_first_subtree(levels: Sequence[int]) -> tuple[list[int], list[int]]:
    # first subtree of the root, and the rest of the tree with it removed
    m = len(levels)
    seen_one = False
    for i, lv in enumerate(levels):
        if lv == 1:
            if seen_one:
                m = i
                break
            seen_one = True
    first = [lv - 1 for lv in levels[1:m]]
    rest = [0] + list(levels[m:])
    return first, rest


def _admissible(levels: list[int]) -> list[int]:
    # accept a rooted sequence that is centrally rooted, or jump to the next one that is
    first, rest = _split_first_subtree(levels)
    h1, h2 = max(first), max(rest)
    ok = h2 >= h1
    if ok and h1 == h2:
        if len(first) > len(rest) or (len(first) == len(rest) and first > rest):
            ok = False
    if ok:
        return levels
    p = len(first)
    nxt = _next_rooted(levels, p)
    if levels[p] > 2:
        first2, _ = _split_first_subtree(nxt)
        tail = list(range(1, max(first2) + 2))
        nxt[-len(tail):] = tail
    return nxt


def iter_free_trees(n: int) -> Iterator[Forest]:
    """One tree per isomorphism class on ``n`` vertices, in a fixed order."""
    if not 1 <= n <= MAX_ENUMERATION_N:
        raise ValueError(f"n must be between 1 and {MAX_ENUMERATION_N}, got {n}")
    if n == 1:
        yield Forest(1)
        return
    levels: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while levels is not None:
        levels = _admissible(levels)
        if levels is None:
            break
        yield _levels_to_forest(levels)
        levels = _next_rooted(levels)


def enumerate_free_trees(n: int) -> list[Forest]:
    return list(iter_free_trees(n))


# -- text formats ----------------------------------------------------------

_TREE_RE = re.compile(r"^\s*(\d+)\s*;(.*)$", re.S)
_CAT_RE = re.compile(r"^\s*C\s*\[([^\]]*)\]\s*$")


def parse_tree(text: str) -> Forest:
    """Parse ``n; u-v, u-v, ...`` or the caterpillar shorthand ``C[a1,a2,...]``."""
    s = text.strip()
    m = _CAT_RE.match(s)
    if m:
        body = m.group(1).strip()
        if not body:
            raise ValueError("empty caterpillar sequence")
        try:
            alpha = [int(x) for x in body.split(",")]
        except ValueError as exc:
            raise ValueError(f"bad caterpillar sequence {s!r}") from exc
        return caterpillar(alpha)
    m = _TREE_RE.match(s)
    if not m:
        raise ValueError(f"not a tree: {text!r}")
    n = int(m.group(1))
    body = m.group(2).strip()
    edges = []
    if body:
        for tok in body.split(","):
            tok = tok.strip()
            if not tok:
                continue
            pieces = tok.split("-")
            if len(pieces) != 2:
                raise ValueError(f"bad edge token {tok!r}")
            try:
                edges.append((int(pieces[0]), int(pieces[1])))
            except ValueError as exc:
                raise ValueError(f"bad edge token {tok!r}") from exc
    return Forest(n, edges)


def format_tree(F: Forest) -> str:
    return f"{F.n_vertices}; " + ", ".join(f"{u}-{v}" for u, v in F.sorted_edges())


def to_dot(F: Forest, name: str = "T") -> str:
    lines = [f"graph {name} {{"]
    for v in range(F.n_vertices):
        lines.append(f"  {v};")
    for u, v in F.sorted_edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
