"""Chromatic symmetric functions of forests expanded in the star basis.

Two independent routes compute the same value:

* :func:`star_expand` applies the deletion / dot-contraction /
  leaf-contraction relation on internal edges until only star forests
  remain;
* :func:`csf_oracle` sums ``(-1)^|A| p_{lambda(A)}`` over all edge subsets
  and converts each power sum to the star basis.

Both bases are multiplicative, so a product of basis elements is the basis
element of the sorted concatenation of indices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable, Iterator, Mapping

from .graph import (
    Edge,
    Forest,
    canonical_code,
    delete_edge,
    dot_contract,
    internal_edges,
    leaf_contract,
    lowest_internal_edge,
)
from .partition import Partition, format_partition, parse_partition

__all__ = [
    "StarPoly",
    "st",
    "DncTrace",
    "star_expand",
    "dnc_traces",
    "csf_oracle",
    "power_to_star",
    "star_to_power",
    "power_poly_to_star",
    "star_poly_to_power",
    "multiply",
    "coefficient",
    "exact_divide",
    "clear_cache",
    "cache_size",
    "product",
    "format_starpoly",
    "parse_starpoly",
    "starpoly_to_json",
    "starpoly_from_json",
    "starpoly_from_obj",
    "power_sum_expansion",
]


def _key(parts: Iterable[int]) -> Partition:
    # trusted constructor; callers guarantee positive parts
    return tuple.__new__(Partition, sorted(parts, reverse=True))


class StarPoly:
    """A homogeneous element of degree ``degree`` written in the star basis."""

    __slots__ = ("degree", "_terms", "_hash")

    def __init__(self, degree: int, terms: Mapping[Iterable[int], int] | None = None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        store: dict[Partition, int] = {}
        for lam, c in (terms or {}).items():
            if not isinstance(c, int):
                raise TypeError(f"coefficients must be integers, got {c!r}")
            lam = Partition(lam)
            if lam.weight != degree:
                raise ValueError(f"key {tuple(lam)} has weight {lam.weight}, expected {degree}")
            if degree > 0 and not lam:
                raise ValueError("empty partition key in positive degree")
            if c:
                store[lam] = store.get(lam, 0) + c
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", {k: v for k, v in store.items() if v})
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, degree: int, terms: dict) -> "StarPoly":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "degree", degree)
        object.__setattr__(obj, "_terms", {k: v for k, v in terms.items() if v})
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("StarPoly is immutable")

    def __reduce__(self):
        # the immutability guard blocks pickle's default slot restore
        return (StarPoly._raw, (self.degree, dict(self._terms)))

    @classmethod
    def one(cls) -> "StarPoly":
        return cls._raw(0, {Partition(): 1})

    @classmethod
    def zero(cls, degree: int) -> "StarPoly":
        return cls._raw(degree, {})

    # -- access -----------------------------------------------------------

    @property
    def terms(self) -> dict[Partition, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Partition, int]]:
        """Terms in lexicographically increasing order of partition."""
        return sorted(self._terms.items())

    def keys(self) -> list[Partition]:
        return sorted(self._terms)

    def coefficient(self, lam: Iterable[int]) -> int:
        lam = tuple(lam)
        if sum(lam) != self.degree:
            raise ValueError(f"partition weight {sum(lam)} does not match degree {self.degree}")
        return self._terms.get(lam, 0)

    def __getitem__(self, lam: Iterable[int]) -> int:
        return self.coefficient(lam)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self.keys())

    def is_zero(self) -> bool:
        return not self._terms

    def leading(self) -> tuple[Partition, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        lam = min(self._terms)
        return lam, self._terms[lam]

    # -- arithmetic ----------------------------------------------------------

    def _check_same_degree(self, other: "StarPoly") -> None:
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "StarPoly") -> "StarPoly":
        if not isinstance(other, StarPoly):
            return NotImplemented
        self._check_same_degree(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return StarPoly._raw(self.degree, out)

    def __sub__(self, other: "StarPoly") -> "StarPoly":
        if not isinstance(other, StarPoly):
            return NotImplemented
        self._check_same_degree(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) - v
        return StarPoly._raw(self.degree, out)

    def __neg__(self) -> "StarPoly":
        return StarPoly._raw(self.degree, {k: -v for k, v in self._terms.items()})

    def __mul__(self, other) -> "StarPoly":
        if isinstance(other, int) and not isinstance(other, bool):
            return StarPoly._raw(self.degree, {k: v * other for k, v in self._terms.items()})
        if not isinstance(other, StarPoly):
            return NotImplemented
        out: dict[Partition, int] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                k = _key(a + b)
                out[k] = out.get(k, 0) + ca * cb
        return StarPoly._raw(self.degree + other.degree, out)

    def __rmul__(self, other) -> "StarPoly":
        if isinstance(other, int) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, StarPoly):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.degree, frozenset(self._terms.items()))))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return f"StarPoly({self.degree}, {{}})"
        body = " ".join(
            f"{'+' if c > 0 else '-'} {abs(c)}*st{format_partition(k)}" for k, c in self.items()
        )
        return f"StarPoly({self.degree}: {body})"

    def __str__(self) -> str:
        return format_starpoly(self)

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        return format_starpoly(self)

    def to_json(self) -> str:
        return starpoly_to_json(self)


def st(*parts: int) -> StarPoly:
    """The basis element ``st_lambda`` for the given parts (any order)."""
    lam = Partition.from_parts(parts)
    return StarPoly(lam.weight, {lam: 1})


def multiply(f: StarPoly, g: StarPoly) -> StarPoly:
    return f * g


def coefficient(f: StarPoly, lam: Iterable[int]) -> int:
    return f.coefficient(lam)


def product(polys: Iterable[StarPoly]) -> StarPoly:
    out = StarPoly.one()
    for p in polys:
        out = out * p
    return out


def exact_divide(f: StarPoly, g: StarPoly) -> StarPoly:
    """Return ``q`` with ``q * g == f``; raise ``ValueError`` if no such ``q`` exists.

    Lexicographic order is compatible with multiplication, so dividing
    leading terms repeatedly produces the quotient or exposes a remainder.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.degree < g.degree:
        raise ValueError("divisor degree exceeds dividend degree")
    glead, gc = g.leading()
    q: dict[Partition, int] = {}
    r = f
    while not r.is_zero():
        rlead, rc = r.leading()
        rest = list(rlead)
        try:
            for x in glead:
                rest.remove(x)
        except ValueError:
            raise ValueError("polynomial is not divisible") from None
        if rc % gc:
            raise ValueError("polynomial is not divisible over the integers")
        k = _key(rest)
        c = rc // gc
        q[k] = q.get(k, 0) + c
        r = r - StarPoly._raw(f.degree - g.degree, {k: c}) * g
    return StarPoly._raw(f.degree - g.degree, q)


# -- text and JSON formats ------------------------------------------------


def format_starpoly(f: StarPoly) -> str:
    """One term per line, lexicographically increasing: ``-2 * st[6,1]``."""
    if f.is_zero():
        return "0\n"
    return "".join(f"{c} * st{format_partition(k)}\n" for k, c in f.items())


_TERM_RE = re.compile(
    r"\s*([+-]?)\s*(\d+)?\s*\*?\s*st\s*[\[(]([^\])]*)[\])]\s*"
)


def parse_starpoly(text: str, degree: int | None = None) -> StarPoly:
    """Parse the line format (also accepts ``+``/``-`` joined terms on one line)."""
    s = text.strip()
    if s.startswith("{"):
        return starpoly_from_json(s)
    if s in ("", "0"):
        if degree is None:
            raise ValueError("zero polynomial needs an explicit degree")
        return StarPoly.zero(degree)
    terms: dict[Partition, int] = {}
    pos = 0
    deg = degree
    flat = " ".join(s.split())
    while pos < len(flat):
        m = _TERM_RE.match(flat, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse star polynomial near {flat[pos:pos + 30]!r}")
        sign, c, body = m.groups()
        coeff = int(c) if c else 1
        if sign == "-":
            coeff = -coeff
        lam = parse_partition("[" + body + "]")
        if deg is None:
            deg = lam.weight
        terms[lam] = terms.get(lam, 0) + coeff
        pos = m.end()
    return StarPoly(deg, terms)


def starpoly_to_json(f: StarPoly) -> str:
    obj = {
        "degree": f.degree,
        "terms": [{"partition": list(k), "coeff": c} for k, c in f.items()],
    }
    return json.dumps(obj, separators=(",", ":"))


def starpoly_from_obj(obj: Mapping) -> StarPoly:
    try:
        degree = int(obj["degree"])
        terms: dict[Partition, int] = {}
        for t in obj["terms"]:
            lam = Partition(int(x) for x in t["partition"])
            c = t["coeff"]
            if not isinstance(c, int) or isinstance(c, bool):
                raise ValueError(f"non-integer coefficient {c!r}")
            if lam in terms:
                raise ValueError(f"duplicate partition {list(lam)}")
            terms[lam] = c
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed star polynomial JSON: {exc}") from exc
    return StarPoly(degree, terms)


def starpoly_from_json(text: str) -> StarPoly:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("star polynomial JSON must be an object")
    return starpoly_from_obj(obj)


# -- star expansion -----------------------------------------------------

EdgeChooser = Callable[[Forest, set], Edge]

_TREE_CACHE: dict[str, StarPoly] = {}


def clear_cache() -> None:
    _TREE_CACHE.clear()


def cache_size() -> int:
    return len(_TREE_CACHE)


def _tree_csf(T: Forest) -> StarPoly:
    code = canonical_code(T).code
    hit = _TREE_CACHE.get(code)
    if hit is not None:
        return hit
    e = lowest_internal_edge(T)
    if e is None:
        out = StarPoly._raw(T.n_vertices, {_key([T.n_vertices]): 1})
    else:
        out = (
            _forest_csf(delete_edge(T, e))
            - _forest_csf(dot_contract(T, e))
            + _forest_csf(leaf_contract(T, e))
        )
    _TREE_CACHE[code] = out
    return out


def _forest_csf(F: Forest) -> StarPoly:
    out = StarPoly.one()
    for comp in F.components:
        if len(comp) <= 2:
            out = out * StarPoly._raw(len(comp), {_key([len(comp)]): 1})
        else:
            out = out * _tree_csf(F.induced(comp))
    return out


def _star_partition(F: Forest) -> Partition:
    return _key(len(c) for c in F.components)


def _worklist(F: Forest, choose: EdgeChooser | None) -> dict[Partition, int]:
    acc: dict[Partition, int] = {}
    work: list[tuple[Forest, int]] = [(F, 1)]
    while work:
        G, sign = work.pop()
        ie = internal_edges(G)
        if not ie:
            lam = _star_partition(G)
            acc[lam] = acc.get(lam, 0) + sign
            continue
        e = choose(G, ie) if choose else min(ie)
        if e not in ie:
            raise ValueError(f"edge chooser returned non-internal edge {e}")
        work.append((delete_edge(G, e), sign))
        work.append((dot_contract(G, e), -sign))
        work.append((leaf_contract(G, e), sign))
    return acc


def star_expand(
    F: Forest, memo: bool = True, choose_edge: EdgeChooser | None = None
) -> StarPoly:
    """Expand ``X_F`` in the star basis.

    With ``memo`` (the default) each connected component is expanded once
    per isomorphism class and the component results are multiplied.
    Without it, or when ``choose_edge`` is given, a plain worklist of
    ``(forest, sign)`` pairs is processed, deleting or contracting the
    chosen internal edge at each step.
    """
    if not isinstance(F, Forest):
        raise TypeError("star_expand expects a Forest")
    if memo and choose_edge is None:
        return _forest_csf(F)
    return StarPoly._raw(F.n_vertices, _worklist(F, choose_edge))


@dataclass(frozen=True)
class DncTrace:
    """A root-to-leaf path of the expansion: the edges used and operations applied."""

    steps: tuple  # of (edge, op) with op in "LMR"
    partition: Partition
    sign: int

    @property
    def ops(self) -> str:
        return "".join(op for _, op in self.steps)

    @property
    def dot_count(self) -> int:
        return self.ops.count("M")


def dnc_traces(F: Forest, choose_edge: EdgeChooser | None = None) -> list[DncTrace]:
    """Every path of the expansion tree, in depth-first L, M, R order."""
    out: list[DncTrace] = []
    work: list[tuple[Forest, int, tuple]] = [(F, 1, ())]
    while work:
        G, sign, steps = work.pop()
        ie = internal_edges(G)
        if not ie:
            out.append(DncTrace(steps, _star_partition(G), sign))
            continue
        e = choose_edge(G, ie) if choose_edge else min(ie)
        # pushed in reverse so that L is explored first
        work.append((leaf_contract(G, e), sign, steps + ((e, "R"),)))
        work.append((dot_contract(G, e), -sign, steps + ((e, "M"),)))
        work.append((delete_edge(G, e), sign, steps + ((e, "L"),)))
    return out


# -- power-sum route ----------------------------------------------------------


def power_to_star(r: int) -> StarPoly:
    """``p_r`` in the star basis."""
    if r < 1:
        raise ValueError("r must be positive")
    n = r - 1
    return StarPoly._raw(
        r, {_key([k + 1] + [1] * (n - k)): (-1) ** k * comb(n, k) for k in range(n + 1)}
    )


def star_to_power(r: int) -> dict[Partition, int]:
    """``st_r`` in the power-sum basis, as a partition to coefficient map."""
    if r < 1:
        raise ValueError("r must be positive")
    n = r - 1
    return {_key([k + 1] + [1] * (n - k)): (-1) ** k * comb(n, k) for k in range(n + 1)}


def _power_mul(a: Mapping[Partition, int], b: Mapping[Partition, int]) -> dict[Partition, int]:
    out: dict[Partition, int] = {}
    for x, cx in a.items():
        for y, cy in b.items():
            k = _key(x + y)
            out[k] = out.get(k, 0) + cx * cy
    return {k: v for k, v in out.items() if v}


def star_poly_to_power(f: StarPoly) -> dict[Partition, int]:
    out: dict[Partition, int] = {}
    for lam, c in f.items():
        term: dict[Partition, int] = {Partition(): 1}
        for part in lam:
            term = _power_mul(term, star_to_power(part))
        for k, v in term.items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


_P_CACHE: dict[Partition, StarPoly] = {}


def _power_partition_to_star(lam: Partition) -> StarPoly:
    hit = _P_CACHE.get(lam)
    if hit is None:
        hit = product(power_to_star(r) for r in lam)
        _P_CACHE[lam] = hit
    return hit


def power_poly_to_star(coeffs: Mapping[Iterable[int], int], degree: int) -> StarPoly:
    out = StarPoly.zero(degree)
    for lam, c in coeffs.items():
        lam = Partition(lam)
        if lam.weight != degree:
            raise ValueError(f"key {tuple(lam)} has weight {lam.weight}, expected {degree}")
        out = out + _power_partition_to_star(lam) * c
    return out


DEFAULT_ORACLE_EDGE_BOUND = 22


def power_sum_expansion(F: Forest, max_edges: int = DEFAULT_ORACLE_EDGE_BOUND) -> dict[Partition, int]:
    """``sum over edge subsets A of (-1)^|A| p_{lambda(A)}``."""
    edges = F.sorted_edges()
    m = len(edges)
    if m > max_edges:
        raise ValueError(f"{m} edges exceeds the brute-force bound {max_edges}")
    n = F.n_vertices
    out: dict[Partition, int] = {}
    for mask in range(1 << m):
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        bits = 0
        for i in range(m):
            if mask >> i & 1:
                bits += 1
                u, v = edges[i]
                parent[find(u)] = find(v)
        sizes: dict[int, int] = {}
        for x in range(n):
            r = find(x)
            sizes[r] = sizes.get(r, 0) + 1
        k = _key(sizes.values())
        out[k] = out.get(k, 0) + (-1) ** bits
    return {k: v for k, v in out.items() if v}


def csf_oracle(F: Forest, max_edges: int = DEFAULT_ORACLE_EDGE_BOUND) -> StarPoly:
    """``X_F`` via the power-sum subset expansion, converted to the star basis."""
    return power_poly_to_star(power_sum_expansion(F, max_edges), F.n_vertices)
