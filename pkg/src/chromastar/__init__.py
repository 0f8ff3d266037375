"""Star-basis chromatic symmetric functions of trees: expansion, analysis,
reconstruction and the linear span of tree expansions."""

from .analysis import (
    AdjacencyRecord,
    LeadingTerm,
    adjacency_records,
    deep_count_from_lead,
    leading_term,
    n_p,
    predicted_hook_coeff,
    predicted_leading_coeff,
)
from .graph import (
    CanonCode,
    Forest,
    LeafComponent,
    canonical_code,
    caterpillar,
    deep_vertices,
    delete_edge,
    diameter,
    disjoint_union,
    dot_contract,
    enumerate_free_trees,
    internal_edges,
    internal_subgraph,
    lambda_lc,
    leaf_components,
    leaf_contract,
    parse_tree,
    format_tree,
    path,
    star,
)
from .partition import Partition, lex_cmp, multiset_diff, parse_partition, partitions_of, sort_concat
from .reconstruct import ReconstructionResult, reconstruct, reconstruct_diam4, reconstruct_diam5
from .starcsf import StarPoly, csf_oracle, parse_starpoly, st, star_expand
from .subspace import (
    caterpillar_basis,
    check_length_sums,
    csf_matrix,
    exact_rank,
    express_in_basis,
    two_edge_relation,
)

__version__ = "0.1.0"
