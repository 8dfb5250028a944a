"""Exact verification engine for intersecting-family extremal properties.

Generates structured set families over complete graphs, bipartite graphs
and uniform hypergraphs; computes exact maximum t-intersecting
subfamilies by branch-and-bound clique search; decides EKR and strong-EKR
status; and machine-checks composition-chain and balanced-cover
certificates together with their decomposition constructions and counting
identities.  Deterministic throughout: no randomness anywhere.
"""

__version__ = "0.1.0"

from .ambient import (
    AmbientGraph,
    build_ambient,
    complete,
    complete_bipartite,
    complete_uniform,
    parse_ambient,
    vertex_set_of,
)
from .chains import (
    ChainVerdict,
    RelationFamily,
    check_counting_identities,
    check_ekr_chain,
    check_special_chain,
    inclusion_relation,
)
from .config import DEFAULT_LIMITS, Limits
from .core import (
    EngineError,
    FamilyTooLarge,
    FormatError,
    GroundSet,
    NodeBudgetExceeded,
    SetFamily,
    Subset,
    UniverseMismatch,
    canonicalize,
    intersection_size,
    read_fam,
    star,
    subfamily,
    write_fam,
)
from .decomp import (
    DecompositionError,
    DecompositionResult,
    bipartite_shift_matchings,
    circle_factorization,
    consecutive_unions,
    exact_cover_decomposition,
    verify_decomposition,
    walecki,
)
from .families import (
    PatternGraph,
    bicliques,
    cliques_complete,
    cycle_pattern,
    cycles_bipartite,
    h_copies,
    k_cycles_complete,
    k_matchings,
    k_subsets,
    matching_pattern,
    perfect_matchings_bipartite,
    separated_k_subsets,
)
from .gbalanced import (
    BalancedVerdict,
    GroupAction,
    act_on_subset,
    bipartite_kit,
    check_g_balanced,
    check_transitive_on_family,
    kit_by_name,
    orbit,
    symmetric_vertex_kit,
)
from .solver import (
    CliqueResult,
    EnumerationResult,
    IntersectionGraph,
    build_intersection_graph,
    enumerate_maximum,
    is_intersecting,
    max_intersecting,
)
from .verify import (
    EkrVerdict,
    check_admissible_ordering,
    check_ekr,
    check_strong_ekr,
    search_admissible_ordering,
    star_sizes,
)
