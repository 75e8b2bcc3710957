"""Path-constrained equivalence classes of causal graphs.

Incorporates "X causes Y" / "X does not cause Y" knowledge into PDAGs and
PAGs, and picks a best consistent subset when the knowledge conflicts with
the graph.
"""

from .bnb import (
    BnBResult,
    ScoreState,
    WeightedConstraint,
    classify_constraints,
    score,
    score_bound,
    search_bnb,
    weights_from_belief,
    weights_from_pvalue,
)
from .classbuild import LatentSpec, dag_to_cpdag, dag_to_mag, latent_project, mag_to_pag, pag_to_mag
from .exceptions import CausalPathsError, GraphClassError, InputError, InvariantError, ResourceError
from .formats import GraphFile, parse_graph, parse_knowledge, serialize_graph, serialize_knowledge, to_dot
from .graph import (
    Edge,
    GraphClass,
    Mark,
    MixedGraph,
    ancestors,
    descendants,
    has_almost_directed_cycle,
    has_directed_cycle,
    has_directed_path,
    has_possibly_directed_path,
    is_ancestor,
    is_collider,
    is_definite_noncollider,
    unshielded_triples,
)
from .incorporate import (
    FoundTable,
    KnowledgeConstraint,
    PCGraph,
    SearchOptions,
    SearchStats,
    Sign,
    causes,
    enumerate_found,
    find_pc_graph,
    is_consistent,
    not_causes,
    prune_rule,
    search,
    select_branch_edge,
    valid,
)
from .propagation import (
    OrientationAssignment,
    PropagationOutcome,
    apply_orientation,
    closure,
    fci_closure,
    meek_closure,
)
from .separation import (
    SeparationTable,
    SeparationWitness,
    build_separation_table,
    is_m_separated,
    markov_equivalent,
    separations_preserved,
)

__all__ = [
    "BnBResult",
    "ScoreState",
    "WeightedConstraint",
    "classify_constraints",
    "score",
    "score_bound",
    "search_bnb",
    "weights_from_belief",
    "weights_from_pvalue",
    "LatentSpec",
    "dag_to_cpdag",
    "dag_to_mag",
    "latent_project",
    "mag_to_pag",
    "pag_to_mag",
    "CausalPathsError",
    "GraphClassError",
    "InputError",
    "InvariantError",
    "ResourceError",
    "GraphFile",
    "parse_graph",
    "parse_knowledge",
    "serialize_graph",
    "serialize_knowledge",
    "to_dot",
    "Edge",
    "GraphClass",
    "Mark",
    "MixedGraph",
    "ancestors",
    "descendants",
    "has_almost_directed_cycle",
    "has_directed_cycle",
    "has_directed_path",
    "has_possibly_directed_path",
    "is_ancestor",
    "is_collider",
    "is_definite_noncollider",
    "unshielded_triples",
    "FoundTable",
    "KnowledgeConstraint",
    "PCGraph",
    "SearchOptions",
    "SearchStats",
    "Sign",
    "causes",
    "enumerate_found",
    "find_pc_graph",
    "is_consistent",
    "not_causes",
    "prune_rule",
    "search",
    "select_branch_edge",
    "valid",
    "OrientationAssignment",
    "PropagationOutcome",
    "apply_orientation",
    "closure",
    "fci_closure",
    "meek_closure",
    "SeparationTable",
    "SeparationWitness",
    "build_separation_table",
    "is_m_separated",
    "markov_equivalent",
    "separations_preserved",
]

__version__ = "0.1.0"
