import heapq
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from chromastar.graph import (
    Forest,
    canonical_code,
    caterpillar,
    deep_vertices,
    delete_edge,
    diameter,
    disjoint_union,
    dot_contract,
    empty_forest,
    enumerate_free_trees,
    format_tree,
    internal_degree,
    internal_edges,
    internal_subgraph,
    internal_subgraph_vertices,
    is_isomorphic,
    iter_free_trees,
    lambda_lc,
    leaf_components,
    leaf_contract,
    lowest_internal_edge,
    parse_tree,
    path,
    star,
    star_forest,
    to_dot,
    tree_centers,
)
from chromastar.verify import random_forest

from known_trees import (
    CATERPILLAR_7,
    CONTRACTION_DEMO,
    DELETION_DEMO,
    INTERNAL_SUBGRAPH_DEMO,
    INTERNAL_SUBGRAPH_MEMBERS,
    THREE_DEEP,
    TWO_DEEP,
    diameter5_tree,
    named_tree,
)

# number of free trees on n vertices, n = 1..14
TREE_COUNTS = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159]


def prufer_decode(seq, n):
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Forest(n, edges)


def all_labeled_trees(n):
    if n <= 2:
        yield Forest(n, [(0, 1)] if n == 2 else [])
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def relabel(F, perm):
    return Forest(F.n_vertices, [(perm[u], perm[v]) for u, v in F.edges])


def brute_isomorphic(F1, F2):
    if F1.n_vertices != F2.n_vertices or len(F1.edges) != len(F2.edges):
        return False
    if sorted(F1.degrees) != sorted(F2.degrees):
        return False
    target = F2.edges
    for perm in itertools.permutations(range(F1.n_vertices)):
        if relabel(F1, perm).edges == target:
            return True
    return False


def random_labeled_tree(n, rng):
    F = random_forest(n, rng, keep=1.0)
    assert F.is_tree()
    return F


# -- construction -----------------------------------------------------------


def test_forest_rejects_invalid_input():
    with pytest.raises(ValueError):
        Forest(3, [(0, 0)])
    with pytest.raises(ValueError):
        Forest(3, [(0, 3)])
    with pytest.raises(ValueError):
        Forest(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Forest(3, [(0, 1), (1, 2), (2, 0)])


def test_forest_basic_structure():
    F = Forest(5, [(0, 1), (1, 2), (3, 4)])
    assert F.degrees == (1, 2, 1, 1, 1)
    assert len(F.components) == 2
    assert not F.is_tree()
    assert F.isolated_count() == 0
    assert Forest(4, [(0, 1)]).isolated_count() == 2
    assert path(4).is_tree()


# -- structural queries ---------------------------------------------------


def test_internal_edges_examples():
    assert internal_edges(star(5)) == set()
    assert internal_edges(path(5)) == {(1, 2), (2, 3)}
    T, ix = named_tree(CATERPILLAR_7)
    assert internal_edges(T) == {(ix["b"], ix["e"]), (ix["e"], ix["f"])}
    assert lowest_internal_edge(path(5)) == (1, 2)
    assert lowest_internal_edge(star(4)) is None


def test_leaf_component_examples():
    T, _ = named_tree(CATERPILLAR_7)
    assert lambda_lc(T) == (4, 2, 1)
    assert [c.order for c in leaf_components(star(6))] == [6]
    assert lambda_lc(path(5)) == (2, 2, 1)


def test_leaf_components_are_stars_with_their_center():
    rng = random.Random(3)
    for _ in range(100):
        T = random_labeled_tree(rng.randrange(1, 14), rng)
        comps = leaf_components(T)
        assert set().union(*(c.members for c in comps)) == set(range(T.n_vertices))
        assert sum(c.order for c in comps) == T.n_vertices
        for c in comps:
            assert c.center in c.members and c.order == len(c.members)
            sub = T.induced(sorted(c.members))
            assert len(sub.edges) == c.order - 1
            center = sorted(c.members).index(c.center)
            assert sub.degree(center) == c.order - 1


def test_order_two_component_center_prefers_higher_degree():
    # vertex 1 has degree 2 in the parent; its leaf-component partner 0 has degree 1
    comps = leaf_components(path(4))
    by_members = {c.members: c.center for c in comps}
    assert by_members[frozenset({0, 1})] == 1
    assert by_members[frozenset({2, 3})] == 2
    # a lone edge: both endpoints have degree 1, so the smaller label wins
    assert leaf_components(path(2))[0].center == 0


def test_deep_vertices_examples():
    T, ix = named_tree(TWO_DEEP)
    assert deep_vertices(T) == {ix["b"], ix["e"]}
    assert ix["f"] not in deep_vertices(T) and T.degree(ix["f"]) >= 2
    assert deep_vertices(star(7)) == set()
    T, ix = named_tree(THREE_DEEP)
    assert deep_vertices(T) == {ix["c"], ix["d"], ix["f"]}
    assert lambda_lc(T) == (3, 2, 2, 1, 1, 1)


def test_diameter_examples():
    for n in range(1, 9):
        assert diameter(path(n)) == n - 1
    for n in range(3, 9):
        assert diameter(star(n)) == 2
    assert diameter(diameter5_tree()) == 5
    with pytest.raises(ValueError):
        diameter(Forest(3, [(0, 1)]))


def test_internal_subgraph_of_drawn_tree():
    T, ix = named_tree(INTERNAL_SUBGRAPH_DEMO)
    inv = {v: k for k, v in ix.items()}
    assert {inv[v] for v in internal_subgraph_vertices(T)} == INTERNAL_SUBGRAPH_MEMBERS
    core = {inv[v] for v in range(T.n_vertices) if internal_degree(T, v) >= 2}
    assert core == {"c2", "c3", "c4"}
    sub = internal_subgraph(T)
    assert sub.n_vertices == 9 and len(sub.edges) == 8 and sub.is_tree()
    # the drawn tree has ten leaf components
    assert lambda_lc(T) == (4, 4, 4, 3, 3, 2, 2, 2, 2, 2)


def test_internal_subgraph_small_cases():
    assert internal_subgraph(caterpillar([3, 4])).n_vertices == 0
    assert internal_subgraph(star(5)).n_vertices == 0
    # two adjacent deep hubs: the internal subgraph is that single edge
    T = diameter5_tree()
    sub = internal_subgraph(T)
    assert sub.n_vertices == 2 and len(sub.edges) == 1
    # both vertices are deep in the tree, i.e. leaf components of order 1
    keep = internal_subgraph_vertices(T)
    assert keep <= deep_vertices(T)
    assert sorted(c.order for c in leaf_components(T) if c.center in keep) == [1, 1]


def _is_star(F):
    return F.n_vertices >= 1 and F.is_tree() and not internal_edges(F)


@pytest.mark.parametrize("n", range(5, 12))
def test_internal_subgraph_shape_by_diameter(n):
    for T in iter_free_trees(n):
        d = diameter(T)
        sub = internal_subgraph(T)
        if d <= 3:
            assert sub.n_vertices == 0
            continue
        assert sub.is_tree()
        if d == 4:
            assert _is_star(sub)
        if d == 5:
            assert _is_star(sub) or len(internal_edges(sub)) == 1
        # the internal edges of the subgraph span paths of at most d - 4 edges
        inner = [v for v in range(sub.n_vertices) if sub.degree(v) >= 2]
        if inner:
            assert diameter(sub.induced(inner)) <= d - 4
        if d >= 5:
            keep = internal_subgraph_vertices(T)
            assert all(u in keep or v in keep for u, v in internal_edges(T))


@pytest.mark.parametrize("n", range(3, 12))
def test_leaf_component_count_is_internal_edges_plus_one(n):
    for T in iter_free_trees(n):
        lam = lambda_lc(T)
        assert len(lam) == len(internal_edges(T)) + 1
        if internal_edges(T):
            assert sum(1 for p in lam if p > 1) >= 2


# -- edge operations -----------------------------------------------------


def test_deletion_demo():
    T, ix = named_tree(DELETION_DEMO)
    assert lambda_lc(T) == (4, 2, 1, 1)
    assert lambda_lc(delete_edge(T, (ix["e"], ix["f"]))) == (5, 3)


def test_contraction_demo():
    T, ix = named_tree(CONTRACTION_DEMO)
    e = (ix["e"], ix["f"])
    assert lambda_lc(T) == (4, 4, 3)
    assert lambda_lc(dot_contract(T, e)) == (6, 4, 1)
    assert lambda_lc(leaf_contract(T, e)) == (7, 4)


def test_operations_reject_missing_edge():
    for op in (delete_edge, dot_contract, leaf_contract):
        with pytest.raises(ValueError):
            op(path(4), (0, 2))


def test_contraction_labels_are_compact():
    D = dot_contract(path(4), (1, 2))
    assert D.n_vertices == 4
    assert D.edges == frozenset({(0, 1), (1, 2)})
    assert D.degree(3) == 0
    L = leaf_contract(path(4), (1, 2))
    assert L.edges == frozenset({(0, 1), (1, 2), (1, 3)})


@pytest.mark.parametrize("n", range(3, 11))
def test_operations_change_internal_edge_count(n):
    for T in iter_free_trees(n):
        k = len(internal_edges(T))
        for e in internal_edges(T):
            D, M, R = delete_edge(T, e), dot_contract(T, e), leaf_contract(T, e)
            assert D.n_vertices == M.n_vertices == R.n_vertices == n
            assert M.isolated_count() == T.isolated_count() + 1
            assert R.isolated_count() == T.isolated_count()
            assert len(internal_edges(M)) == k - 1
            assert len(internal_edges(R)) == k - 1
            assert k - len(internal_edges(D)) in (1, 2, 3)


# -- canonical form and enumeration ---------------------------------------


def test_canonical_code_examples():
    assert canonical_code(path(4)) == canonical_code(Forest(4, [(3, 0), (0, 2), (2, 1)]))
    assert canonical_code(path(4)) != canonical_code(star(4))
    six = enumerate_free_trees(6)
    assert len({canonical_code(T) for T in six}) == 6
    assert canonical_code(Forest(3, [(0, 1)])) == canonical_code(Forest(3, [(1, 2)]))
    assert tree_centers(path(4)) == [1, 2]
    assert tree_centers(path(5)) == [2]


@pytest.mark.parametrize("n", range(1, 15))
def test_enumeration_counts_and_no_duplicates(n):
    trees = enumerate_free_trees(n)
    assert len(trees) == TREE_COUNTS[n - 1]
    assert all(T.n_vertices == n and T.is_tree() for T in trees)
    assert len({canonical_code(T) for T in trees}) == len(trees)


def test_enumeration_is_deterministic():
    assert [format_tree(T) for T in enumerate_free_trees(9)] == [
        format_tree(T) for T in enumerate_free_trees(9)
    ]


def test_enumeration_rejects_out_of_range():
    with pytest.raises(ValueError):
        enumerate_free_trees(0)
    with pytest.raises(ValueError):
        enumerate_free_trees(21)


@pytest.mark.parametrize("n", range(1, 9))
def test_enumeration_matches_labeled_tree_oracle(n):
    codes = {canonical_code(T) for T in all_labeled_trees(n)}
    assert codes == {canonical_code(T) for T in enumerate_free_trees(n)}


@pytest.mark.parametrize("n", range(2, 13))
def test_enumeration_closed_under_leaf_extension(n):
    grown = set()
    for T in enumerate_free_trees(n - 1):
        for v in range(n - 1):
            grown.add(canonical_code(Forest(n, list(T.edges) + [(v, n - 1)])))
    assert grown == {canonical_code(T) for T in enumerate_free_trees(n)}


@pytest.mark.parametrize("n", range(2, 8))
def test_canonical_code_agrees_with_permutation_search(n):
    rng = random.Random(n)
    trees = enumerate_free_trees(n)
    shuffled = [relabel(T, rng.sample(range(n), n)) for T in trees]
    for A in trees:
        for B in shuffled:
            assert (canonical_code(A) == canonical_code(B)) == brute_isomorphic(A, B)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=16), st.integers(min_value=0, max_value=10**6))
def test_canonical_code_invariant_under_relabeling(n, seed):
    rng = random.Random(seed)
    F = random_forest(n, rng)
    G = relabel(F, rng.sample(range(n), n))
    assert canonical_code(F) == canonical_code(G)
    assert is_isomorphic(F, G)


# -- families ------------------------------------------------------------


def test_caterpillar_examples():
    C = caterpillar([4, 2, 1, 1, 2, 1, 1, 6])
    assert C.n_vertices == 18 and C.is_tree()
    assert lambda_lc(C) == (6, 4, 2, 2, 1, 1, 1, 1)
    assert is_isomorphic(caterpillar([7]), star(7))
    C = caterpillar([2, 4, 2])
    assert C.n_vertices == 8 and lambda_lc(C) == (4, 2, 2)
    assert is_isomorphic(caterpillar([2, 1, 2]), path(5))
    assert is_isomorphic(caterpillar([3, 1, 4]), caterpillar([4, 1, 3]))


def test_caterpillar_rejects_unit_endpoints():
    with pytest.raises(ValueError):
        caterpillar([1, 3])
    with pytest.raises(ValueError):
        caterpillar([3, 2, 1])
    with pytest.raises(ValueError):
        caterpillar([])
    assert caterpillar([1]).n_vertices == 1


@given(st.lists(st.integers(min_value=1, max_value=5), min_size=2, max_size=7))
def test_caterpillar_leaf_components_are_the_sequence(alpha):
    alpha[0] = max(alpha[0], 2)
    alpha[-1] = max(alpha[-1], 2)
    C = caterpillar(alpha)
    assert C.n_vertices == sum(alpha)
    assert lambda_lc(C) == tuple(sorted(alpha, reverse=True))


def test_disjoint_union_examples():
    U = disjoint_union(star(2), star(1))
    assert U.n_vertices == 3 and len(U.edges) == 1
    T = diameter5_tree()
    assert disjoint_union(T, empty_forest(0)).edges == T.edges
    assert disjoint_union(empty_forest(0), T).edges == T.edges
    left = star(8)
    right = path(5)
    U = disjoint_union(left, right)
    assert U.n_vertices == 13
    assert sorted(len(c) for c in U.components) == [5, 8]


def test_star_forest():
    F = star_forest([3, 2, 1])
    assert F.n_vertices == 6 and lambda_lc(F) == (3, 2, 1)


# -- text formats ----------------------------------------------------------


def test_parse_tree_formats():
    assert parse_tree("5; 0-1, 1-2, 2-3, 3-4").edges == path(5).edges
    assert is_isomorphic(parse_tree("C[2,1,2]"), path(5))
    assert parse_tree("1;").n_vertices == 1
    for bad in ("", "x; 0-1", "3; 0-1-2", "3; 0-a", "C[]", "3; 0-3"):
        with pytest.raises(ValueError):
            parse_tree(bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=20), st.integers(min_value=0, max_value=10**6))
def test_tree_text_round_trip(n, seed):
    F = random_forest(n, random.Random(seed))
    assert parse_tree(format_tree(F)) == F


def test_to_dot_lists_every_vertex_and_edge():
    text = to_dot(path(3))
    assert text.startswith("graph T {")
    assert "0 -- 1;" in text and "1 -- 2;" in text and "  2;" in text
