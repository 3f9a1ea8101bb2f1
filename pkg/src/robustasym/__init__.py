"""Robust graph asymmetry: random graph models, delta(k) profiles and
verifiers for the accompanying probabilistic claims."""

from .exceptions import (
    BudgetExceededError,
    DimensionError,
    DomainError,
    EdgeListFormatError,
    FingerprintMismatchError,
    NormalizationError,
    SearchOverflowError,
)
from .graph import (
    Graph,
    apply_perm,
    covered_edges,
    degree_stats,
    dist,
    dist_perm,
    induced_edge_count,
    max_common_neighbors,
    parse_edge_list,
    format_edge_list,
    read_edge_list,
    write_edge_list,
)
from .permutations import (
    Permutation,
    count_k_perms,
    derangement_count,
    enumerate_k_perms,
    pair_fixpoints,
    sample_k_perm,
    support,
)
from .generators import GnpdParams, GnpParams, gen_gnp, gen_gnpd
from .search import (
    AsymmetryProfile,
    DeltaEntry,
    SearchParams,
    Verdict,
    exact_delta_2,
    exact_delta_k,
    exact_profile,
    has_nontrivial_automorphism,
    heuristic_delta_k,
    is_delta_asymmetric,
)
from .checks import CheckReport, DistanceExperiment

__version__ = "0.1.0"
