"""Star-vectors of all trees on ``n`` vertices, their rank, and the caterpillar basis."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import CanonCode, Forest, canonical_code, caterpillar, enumerate_free_trees
from .partition import Partition, format_partition, partitions_of
from .starcsf import StarPoly, star_expand

__all__ = [
    "CsfMatrix",
    "BasisExpansion",
    "star_vector",
    "csf_matrix",
    "bareiss_rank",
    "exact_rank",
    "caterpillar_basis",
    "basis_index",
    "express_in_basis",
    "check_length_sums",
    "two_edge_relation",
    "MAX_MATRIX_N",
]

MAX_MATRIX_N = 16


@dataclass(frozen=True)
class CsfMatrix:
    n: int
    row_trees: tuple  # CanonCode per row
    columns: tuple  # partitions of n, lex increasing
    entries: tuple  # tuple of integer tuples
    trees: tuple = ()

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.columns)

    def row_poly(self, i: int) -> StarPoly:
        return StarPoly(self.n, {lam: c for lam, c in zip(self.columns, self.entries[i]) if c})

    def column(self, lam: Sequence[int]) -> list[int]:
        j = self.columns.index(tuple(lam))
        return [row[j] for row in self.entries]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tree"] + [format_partition(c) for c in self.columns])
        for code, row in zip(self.row_trees, self.entries):
            w.writerow([str(code)] + list(row))
        return buf.getvalue()


@dataclass(frozen=True)
class BasisExpansion:
    target: StarPoly
    coefficients: dict  # non-hook Partition -> Fraction

    def nonzero(self) -> dict:
        return {k: v for k, v in self.coefficients.items() if v}


def star_vector(f: StarPoly) -> tuple[int, ...]:
    return tuple(f.coefficient(lam) for lam in partitions_of(f.degree))


def csf_matrix(n: int, trees: Sequence[Forest] | None = None, polys: Sequence[StarPoly] | None = None) -> CsfMatrix:
    """Rows are star-vectors of all trees on ``n`` vertices, sorted by canonical code.

    ``polys`` may carry precomputed expansions matching ``trees``.
    """
    if not 1 <= n <= MAX_MATRIX_N:
        raise ValueError(f"n must be between 1 and {MAX_MATRIX_N}, got {n}")
    if trees is None:
        trees = enumerate_free_trees(n)
    if polys is None:
        polys = [star_expand(T) for T in trees]
    rows = sorted(
        ((canonical_code(T), T, f) for T, f in zip(trees, polys)), key=lambda r: r[0]
    )
    columns = tuple(partitions_of(n))
    entries = tuple(tuple(f.coefficient(lam) for lam in columns) for _, _, f in rows)
    return CsfMatrix(
        n,
        tuple(code for code, _, _ in rows),
        columns,
        entries,
        tuple(T for _, T, _ in rows),
    )


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free Gaussian elimination."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    n_rows, n_cols = len(M), len(M[0])
    rank, prev = 0, 1
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if M[i][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        pv = M[rank][col]
        for i in range(rank + 1, n_rows):
            a = M[i][col]
            row_i, row_r = M[i], M[rank]
            for j in range(col + 1, n_cols):
                # exact: Bareiss guarantees divisibility by the previous pivot
                row_i[j] = (pv * row_i[j] - a * row_r[j]) // prev
            row_i[col] = 0
        prev = pv
        rank += 1
        if rank == n_rows:
            break
    return rank


def exact_rank(M: CsfMatrix) -> int:
    return bareiss_rank(M.entries)


def basis_index(mu: Partition) -> list[int]:
    """Caterpillar sequence ``(mu_2, ..., mu_l, mu_1)`` for a non-hook partition."""
    mu = Partition(mu)
    if mu.is_hook():
        raise ValueError(f"{list(mu)} is a hook partition")
    return list(mu[1:]) + [mu[0]]


def caterpillar_basis(n: int) -> list[tuple[Partition, Forest]]:
    """One caterpillar per non-hook partition of ``n``, tagged by that partition."""
    if n < 1:
        raise ValueError("n must be positive")
    return [(mu, caterpillar(basis_index(mu))) for mu in partitions_of(n) if not mu.is_hook()]


def express_in_basis(f: StarPoly) -> BasisExpansion:
    """Exact coordinates of ``f`` on the caterpillar basis.

    Basis element ``mu`` has leading partition ``mu``, so processing the
    basis in increasing lexicographic order peels off one coordinate at a
    time; leading coefficients are nonzero, so no pivot can vanish.
    """
    basis = caterpillar_basis(f.degree)
    resid: dict[Partition, Fraction] = {k: Fraction(c) for k, c in f.items()}
    coeffs: dict[Partition, Fraction] = {}
    for mu, C in basis:
        X = star_expand(C)
        lead, lc = X.leading()
        if lead != mu:
            raise RuntimeError(f"basis caterpillar for {list(mu)} has leading partition {list(lead)}")
        c = resid.get(mu, Fraction(0)) / lc
        coeffs[mu] = c
        if c:
            for k, v in X.items():
                resid[k] = resid.get(k, Fraction(0)) - c * v
    leftover = {k: v for k, v in resid.items() if v}
    if leftover:
        raise ValueError(
            f"input lies outside the span of tree expansions (residual on {len(leftover)} keys)"
        )
    return BasisExpansion(f, coeffs)


def check_length_sums(f: StarPoly, cc: int) -> bool:
    """True when, for every length ``m > cc``, the length-``m`` coefficients sum to zero."""
    sums: dict[int, int] = {}
    for lam, c in f.items():
        sums[len(lam)] = sums.get(len(lam), 0) + c
    return all(s == 0 for m, s in sums.items() if m > cc)


def _X(alpha: Sequence[int]) -> StarPoly:
    return star_expand(caterpillar(alpha))


def two_edge_relation(a: int, b: int, c: int) -> tuple[bool, bool]:
    """Check the two linear relations among caterpillars with three leaf components.

    Requires ``a >= b >= c >= 2`` so that every caterpillar in the relations
    has both end components of order above 1.
    """
    if not (a >= b >= c >= 2):
        raise ValueError(f"need a >= b >= c >= 2, got {(a, b, c)}")
    shared = _X([c, 1, a + b - 1]) - _X([c + 1, a + b - 1])
    rhs3 = _X([b, c, a]) - _X([b, 1, a + c - 1]) + _X([b + 1, a + c - 1]) + shared
    rhs4 = _X([b, c, a]) - _X([a, 1, b + c - 1]) + _X([a + 1, b + c - 1]) + shared
    return _X([a, b, c]) == rhs3, _X([b, a, c]) == rhs4
