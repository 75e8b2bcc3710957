"""Branch-and-bound selection of a best-scoring consistent knowledge subset.

Each constraint carries a utility ``u`` (earned when a class member
satisfies it) and a cost ``c`` (earned when it does not).  The search walks
the same circle-by-circle tree as knowledge incorporation, classifies every
constraint as satisfied, violated or still open at each node, and cuts the
subtree once the optimistic bound cannot beat the best leaf seen so far.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .exceptions import InputError, ResourceError
from .graph import (
    ARROW,
    CIRCLE,
    TAIL,
    GraphClass,
    MixedGraph,
    _children_masks,
    _closure,
    _possibly_directed_reach,
)
from .incorporate import (
    KnowledgeConstraint,
    SearchOptions,
    SearchStats,
    Sign,
    _colliders,
    _constraint_indices,
    _has_circle,
    _prepare,
    _valid_raw,
)
from .propagation import _apply_raw
from .separation import SeparationTable

__all__ = [
    "WeightedConstraint",
    "ScoreState",
    "BnBResult",
    "score",
    "score_bound",
    "classify_constraints",
    "search_bnb",
    "weights_from_belief",
    "weights_from_pvalue",
    "PROB_EPS",
]

PROB_EPS = 1e-12


@dataclass(frozen=True)
class WeightedConstraint:
    constraint: KnowledgeConstraint
    u: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.c)):
            raise InputError(f"weights of {self.constraint} must be finite")

    def __str__(self):
        return f"{self.constraint} u={self.u:g} c={self.c:g}"


@dataclass(frozen=True)
class ScoreState:
    """Partition of constraint indices into satisfied, violated and remaining."""

    satisfied: frozenset = frozenset()
    violated: frozenset = frozenset()
    remaining: frozenset = frozenset()


@dataclass
class BnBResult:
    best_score: float
    best_subset: frozenset
    stats: SearchStats = field(default_factory=SearchStats)
    leaf: MixedGraph | None = None

    def selected(self, k: Sequence) -> list:
        """The chosen constraints, in input order."""
        return [w.constraint for i, w in enumerate(_as_weighted(k)) if i in self.best_subset]


def _as_weighted(k) -> list:
    return [w if isinstance(w, WeightedConstraint) else WeightedConstraint(w) for w in k]


def score(subset, k: Sequence[WeightedConstraint]) -> float:
    """Sum of ``u`` over the subset plus ``c`` over everything else."""
    k = _as_weighted(k)
    subset = set(subset)
    if not subset <= set(range(len(k))):
        raise InputError("subset refers to constraints outside k")
    return sum(w.u if i in subset else w.c for i, w in enumerate(k))


def score_bound(state: ScoreState, k: Sequence[WeightedConstraint]) -> float:
    """Best score any completion below ``state`` could reach."""
    k = _as_weighted(k)
    total = 0.0
    for i in state.satisfied:
        total += k[i].u
    for i in state.violated:
        total += k[i].c
    for i in state.remaining:
        total += max(k[i].u, k[i].c)
    return total


def _classify_raw(m, kc) -> tuple:
    ch = _children_masks(m)
    sat, vio, rem = [], [], []
    for idx, (i, j, positive) in enumerate(kc):
        directed = _closure(ch, 1 << i) >> j & 1
        possible = _possibly_directed_reach(m, i) >> j & 1
        if positive:
            (sat if directed else vio if not possible else rem).append(idx)
        else:
            (vio if directed else sat if not possible else rem).append(idx)
    return sat, vio, rem


def classify_constraints(p: MixedGraph, k: Sequence) -> ScoreState:
    """Which constraints every, no, or only some completion of ``p`` satisfies."""
    k = _as_weighted(k)
    kc = _constraint_indices(p, [w.constraint for w in k])
    sat, vio, rem = _classify_raw(p._m, kc)
    return ScoreState(frozenset(sat), frozenset(vio), frozenset(rem))


class _BnB:
    def __init__(self, p, k, table, mode, opts, bound, stats):
        self.k = k
        self.kc = _constraint_indices(p, [w.constraint for w in k])
        self.u = [w.u for w in k]
        self.c = [w.c for w in k]
        self.best_u = [max(a, b) for a, b in zip(self.u, self.c)]
        self.table = table
        self.mode = mode
        self.colliders = _colliders(p._m) if mode == GraphClass.PDAG else None
        self.budget = opts.node_budget
        self.bound = bound
        self.stats = stats
        self.vertices = p.vertices
        self.best = -math.inf
        self.best_subset = frozenset()
        self.best_leaf = None

    def result(self) -> BnBResult:
        leaf = None
        if self.best_leaf is not None:
            kind = GraphClass.MAG if self.mode == GraphClass.PAG else GraphClass.DAG
            leaf = MixedGraph.from_matrix(self.vertices, self.best_leaf, kind, validate=False)
        return BnBResult(self.best, self.best_subset, self.stats, leaf)

    def visit(self, m, depth: int) -> None:
        st = self.stats
        st.nodes_visited += 1
        if depth > st.max_depth:
            st.max_depth = depth
        if self.budget is not None and st.nodes_visited > self.budget:
            raise ResourceError(f"node budget of {self.budget} exhausted", partial=self.result())
        leaf = not _has_circle(m)
        # structural validity only; violated constraints are scored, not cut
        if not _valid_raw(m, (), self.mode, self.table, self.colliders, leaf):
            return
        sat, vio, rem = _classify_raw(m, self.kc)
        if leaf:
            st.leaves_found += 1
            s = sum(self.u[i] for i in sat) + sum(self.c[i] for i in vio)
            if s > self.best:
                self.best = s
                self.best_subset = frozenset(sat)
                self.best_leaf = [row[:] for row in m]
            return
        if self.bound:
            ub = (sum(self.u[i] for i in sat) + sum(self.c[i] for i in vio)
                  + sum(self.best_u[i] for i in rem))
            if ub <= self.best:
                return
        i, j = next((i, j) for i, row in enumerate(m) for j, mk in enumerate(row) if mk == CIRCLE)
        for mark in (ARROW, TAIL):
            child = [row[:] for row in m]
            ok, _ = _apply_raw(child, self.mode, i, j, mark)
            if ok:
                self.visit(child, depth + 1)
            else:
                st.nodes_visited += 1


def search_bnb(p: MixedGraph, k: Sequence, opts: SearchOptions | None = None, *,
               reference: MixedGraph | None = None, table: SeparationTable | None = None,
               bound: bool = True, stats: SearchStats | None = None) -> BnBResult:
    """Highest-scoring set of constraints jointly satisfied by one class member.

    ``k`` may mix plain constraints (weighted ``u=1, c=0``) and
    :class:`WeightedConstraint`.  ``best_subset`` holds the indices the
    witnessing leaf satisfies; among equal scores the first leaf in branch
    order (arrowhead before tail) wins.  ``bound=False`` turns off the
    score cut.  When the class is empty ``best_score`` is ``-inf``.
    """
    k = _as_weighted(k)
    opts, mode, table = _prepare(p, opts, reference, table)
    stats = stats if stats is not None else SearchStats()
    stats.uncertainties = p.num_circles()
    b = _BnB(p, k, table, mode, opts, bound, stats)
    b.visit([row[:] for row in p._m], 0)
    return b.result()


def _clamp(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise InputError(f"probability {p} outside [0, 1]")
    return min(max(p, PROB_EPS), 1.0 - PROB_EPS)


def weights_from_belief(p: float) -> tuple:
    """``(log p, log(1 - p))``: with independent beliefs the score is a log prior."""
    p = _clamp(p)
    return math.log(p), math.log1p(-p)


def weights_from_pvalue(pv: float, sign) -> tuple:
    """Weights from a test p-value.

    A positive constraint comes from a small p-value (dependence found), so
    its belief is ``1 - pv``.  A negative one comes from a large p-value and
    its belief is ``pv``.  Both then go through ``(log(1 - p'), log p')``
    with ``p' = pv`` for positive and ``p' = 1 - pv`` for negative constraints.
    """
    pv = _clamp(pv)
    positive = sign.positive if isinstance(sign, KnowledgeConstraint) else Sign(sign) == Sign.POSITIVE
    q = pv if positive else 1.0 - pv
    q = _clamp(q)
    return math.log1p(-q), math.log(q)
