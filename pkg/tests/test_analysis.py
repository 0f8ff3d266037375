from collections import Counter
from math import comb

import pytest

from chromastar.analysis import (
    adjacency_records,
    deep_count_from_lead,
    is_proper,
    lambda_lc,
    leading_term,
    n_p,
    n_p_table,
    predicted_hook_coeff,
    predicted_leading_coeff,
)
from chromastar.graph import (
    caterpillar,
    deep_vertices,
    delete_edge,
    dot_contract,
    hub_tree,
    internal_degree,
    internal_edges,
    iter_free_trees,
    leaf_components,
    leaf_contract,
    path,
    star,
)
from chromastar.starcsf import StarPoly, st, star_expand
from chromastar.verify import predicted_lc_after

from known_trees import (
    CATERPILLAR_7,
    DISTINCT_PARTS_RECORDS,
    ENDPOINT_COUNTS,
    THREE_DEEP,
    TWO_DEEP,
    diameter4_tree,
    distinct_parts_tree,
    endpoint_count_tree,
    golden,
    named_tree,
)


def records_table(f, k=1):
    return {tuple(r.mu): (r.coeff, tuple(r.e_mu_sorted())) for r in adjacency_records(f, k)}


# -- leading term -------------------------------------------------------------


def test_leading_term_examples():
    lt = leading_term(star_expand(path(5)))
    assert (lt.partition, lt.coeff) == ((2, 2, 1), -1)
    lt = leading_term(golden("spider_222"))
    assert (lt.partition, lt.coeff) == ((2, 2, 2, 1), -2)
    assert leading_term(st(8)).partition == (8,)
    with pytest.raises(ValueError):
        leading_term(StarPoly.zero(4))


def test_lambda_lc_examples():
    T, _ = named_tree(CATERPILLAR_7)
    assert lambda_lc(T) == (4, 2, 1)
    assert lambda_lc(caterpillar([6, 1, 1, 1, 1, 4])) == (6, 4, 1, 1, 1, 1)
    assert leading_term(star_expand(caterpillar([6, 1, 1, 1, 1, 4]))).partition == (6, 4, 1, 1, 1, 1)


def test_predicted_leading_coeff_examples():
    assert predicted_leading_coeff(distinct_parts_tree()) == 1
    assert predicted_leading_coeff(hub_tree(1, [2, 2, 2])) == -2
    T, _ = named_tree(TWO_DEEP)
    assert predicted_leading_coeff(T) == 2
    assert leading_term(star_expand(T)).coeff == 2


def test_deep_count_from_lead_examples():
    assert deep_count_from_lead((3, 2, 2, 1, 1, 1)) == 3
    T, _ = named_tree(THREE_DEEP)
    assert deep_count_from_lead(leading_term(star_expand(T)).partition) == 3
    assert deep_count_from_lead((5, 4)) == 0
    assert deep_count_from_lead((9,)) == 0


def test_predicted_hook_coeff_examples():
    T, _ = named_tree(CATERPILLAR_7)
    assert predicted_hook_coeff(T, 1) == -2 == star_expand(T).coefficient((6, 1))
    assert predicted_hook_coeff(T, 0) == 1
    assert predicted_hook_coeff(path(5), 2) == 1 == star_expand(path(5)).coefficient((3, 1, 1))
    with pytest.raises(ValueError):
        predicted_hook_coeff(path(5), 4)
    with pytest.raises(ValueError):
        predicted_hook_coeff(path(5), -1)


# K_1 is an isolated vertex, outside the deep-vertex count's precondition
@pytest.mark.parametrize("n", range(2, 11))
def test_leading_term_matches_structure(n):
    for T in iter_free_trees(n):
        lt = leading_term(star_expand(T))
        assert lt.partition == lambda_lc(T)
        assert lt.coeff == predicted_leading_coeff(T)
        assert deep_count_from_lead(lt.partition) == len(deep_vertices(T))
        assert is_proper(T) == (lt.partition.multiplicity(1) == 0)


@pytest.mark.parametrize("n", range(2, 11))
def test_hook_coefficients(n):
    for T in iter_free_trees(n):
        f = star_expand(T)
        k = len(internal_edges(T))
        for m in range(0, n - 1):
            assert f.coefficient((n - m,) + (1,) * m) == (-1) ** m * comb(k, m) == predicted_hook_coeff(T, m)


# -- leaf-component partitions under the edge operations ----------------------


@pytest.mark.parametrize("n", range(3, 10))
def test_edge_operation_formulas_and_monotonicity(n):
    for T in iter_free_trees(n):
        lam = lambda_lc(T)
        deep = deep_vertices(T)
        for e in internal_edges(T):
            after = {
                "L": lambda_lc(delete_edge(T, e)),
                "M": lambda_lc(dot_contract(T, e)),
                "R": lambda_lc(leaf_contract(T, e)),
            }
            assert after == predicted_lc_after(T, e)
            assert lam <= after["L"] and lam <= after["M"] and lam < after["R"]
            deg2_deep = any(x in deep and T.degree(x) == 2 for x in e)
            assert (after["L"] == lam) == (not deg2_deep)
            assert (after["M"] == lam) == any(x in deep for x in e)


# -- adjacency records and endpoint counts ------------------------------------


def test_records_of_distinct_parts_tree():
    f = star_expand(distinct_parts_tree())
    assert leading_term(f).partition == (9, 7, 6, 5, 4, 3, 2)
    assert records_table(f) == {mu: (1, e) for mu, e in DISTINCT_PARTS_RECORDS.items()}


def test_records_of_diameter_four_tree():
    f = golden("diam4_17")
    assert records_table(f) == {
        (9, 3, 3, 2): (1, (5, 4)),
        (7, 5, 3, 2): (2, (4, 3)),
        (6, 5, 3, 3): (1, (4, 2)),
    }
    assert n_p(f, 4) == 4 > leading_term(f).partition.multiplicity(4)


def test_records_with_k_zero_and_two():
    f = golden("diam4_17")
    (only,) = adjacency_records(f, 0)
    assert only.mu == leading_term(f).partition and only.e_mu == Counter()
    lead = leading_term(f).partition
    for r in adjacency_records(f, 2):
        assert len(r.mu) == len(lead) - 2 and 1 not in r.mu
    with pytest.raises(ValueError):
        adjacency_records(f, -1)
    with pytest.raises(ValueError):
        adjacency_records(StarPoly.zero(3))


def test_records_without_filter_include_ones():
    f = star_expand(path(6))
    kept = adjacency_records(f, 1, no_ones=False)
    assert any(1 in r.mu for r in kept)
    assert all(1 not in r.mu for r in adjacency_records(f, 1))


def test_endpoint_counts_example():
    f = star_expand(endpoint_count_tree())
    assert n_p_table(f) == ENDPOINT_COUNTS


def test_endpoint_counts_of_bistars():
    for i in range(2, 7):
        for j in range(2, i + 1):
            f = star_expand(caterpillar([i, j]))
            table = n_p_table(f)
            if i == j:
                assert table == {i: 2}
            else:
                assert table == {i: 1, j: 1}


def test_n_p_rejects_absent_part():
    with pytest.raises(ValueError):
        n_p(golden("diam4_17"), 7)


def _endpoint_counts_from_tree(T):
    order = {c.center: c.order for c in leaf_components(T)}
    comp_of = {v: c.center for c in leaf_components(T) for v in c.members}
    out = Counter()
    for u, v in internal_edges(T):
        out[order[comp_of[u]]] += 1
        out[order[comp_of[v]]] += 1
    return out


@pytest.mark.parametrize("n", range(3, 11))
def test_endpoint_counts_agree_with_tree_for_proper_trees(n):
    for T in iter_free_trees(n):
        if deep_vertices(T):
            continue
        f = star_expand(T)
        from_tree = _endpoint_counts_from_tree(T)
        assert n_p_table(f) == {p: from_tree[p] for p in set(lambda_lc(T))}
        # each 1-edge record counts internal edges joining components of its two orders
        pairs = Counter()
        order = {v: c.order for c in leaf_components(T) for v in c.members}
        for u, v in internal_edges(T):
            pairs[tuple(sorted((order[u], order[v]), reverse=True))] += 1
        got = Counter()
        for r in adjacency_records(f):
            got[tuple(r.e_mu_sorted())] += r.coeff
        assert got == pairs


@pytest.mark.parametrize("n", range(3, 11))
def test_internal_orders_detected_by_endpoint_excess(n):
    for T in iter_free_trees(n):
        if deep_vertices(T):
            continue
        f = star_expand(T)
        lam = leading_term(f).partition
        table = n_p_table(f)
        core = {v for v in range(n) if internal_degree(T, v) >= 2}
        inside = {c.order for c in leaf_components(T) if c.center in core}
        assert inside == {p for p in set(lam) if table[p] > lam.multiplicity(p)}


@pytest.mark.parametrize("n", range(3, 11))
def test_single_deep_vertex_records_count_its_neighbours(n):
    for T in iter_free_trees(n):
        deep = deep_vertices(T)
        if len(deep) != 1:
            continue
        (u,) = deep
        order = {c.center: c.order for c in leaf_components(T)}
        want = Counter(order[w] for w in T.neighbors(u))
        got = Counter()
        for r in adjacency_records(star_expand(T)):
            if r.e_mu[1] == 1:
                (q,) = [x for x in r.e_mu.elements() if x != 1]
                got[q] += r.coeff
        assert got == want
