"""Incorporating path-constraints into a PDAG or PAG.

``find_pc_graph`` enumerates, explicitly or implicitly, every member of the
equivalence class that satisfies the knowledge, records which orientation
of each circle was realised by at least one of them, and keeps the marks
on which all of them agree.  Constraints that the resulting solid graph
does not settle are attached as dashed knowledge edges.

The enumeration is a chronological backtracking search with forward
checking (``apply_orientation``) and an optional pruning rule: once every
mark fixed on the current path, and both orientations of every mark still
open, have been seen in some valid member, the subtree cannot teach
anything new.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exceptions import InputError, ResourceError
from .graph import (
    ARROW,
    CIRCLE,
    TAIL,
    GraphClass,
    Mark,
    MixedGraph,
    _children_masks,
    _closure,
    _has_almost_directed_cycle,
    _has_directed_cycle,
    _possibly_directed_reach,
    _unshielded,
    has_directed_path,
    has_possibly_directed_path,
)
from .propagation import _apply_raw
from .separation import SeparationTable, _preserved_raw, build_separation_table

__all__ = [
    "Sign",
    "KnowledgeConstraint",
    "causes",
    "not_causes",
    "FoundTable",
    "PCGraph",
    "SearchOptions",
    "SearchStats",
    "valid",
    "prune_rule",
    "select_branch_edge",
    "search",
    "find_pc_graph",
    "knowledge_edges",
    "is_consistent",
    "enumerate_found",
]


class Sign(enum.Enum):
    POSITIVE = "=>"
    NEGATIVE = "!=>"


@dataclass(frozen=True)
class KnowledgeConstraint:
    """``x => y``: x is a (possibly indirect) cause of y; ``x !=> y``: it is not."""

    x: str
    y: str
    sign: Sign = Sign.POSITIVE

    def __post_init__(self):
        if self.x == self.y:
            raise InputError(f"constraint relates {self.x} to itself")
        object.__setattr__(self, "sign", Sign(self.sign))

    @property
    def positive(self) -> bool:
        return self.sign is Sign.POSITIVE

    def negated(self) -> "KnowledgeConstraint":
        other = Sign.NEGATIVE if self.positive else Sign.POSITIVE
        return KnowledgeConstraint(self.x, self.y, other)

    def satisfied_by(self, g: MixedGraph) -> bool:
        """Exact on graphs without circles."""
        return has_directed_path(g, self.x, self.y) == self.positive

    @classmethod
    def parse(cls, text: str) -> "KnowledgeConstraint":
        parts = text.split()
        if len(parts) != 3 or parts[1] not in ("=>", "!=>"):
            raise InputError(f"cannot parse constraint {text!r}")
        return cls(parts[0], parts[2], Sign(parts[1]))

    def __str__(self):
        return f"{self.x} {self.sign.value} {self.y}"


def causes(x: str, y: str) -> KnowledgeConstraint:
    return KnowledgeConstraint(x, y, Sign.POSITIVE)


def not_causes(x: str, y: str) -> KnowledgeConstraint:
    return KnowledgeConstraint(x, y, Sign.NEGATIVE)


class FoundTable:
    """For each circle of the input: has an arrowhead / a tail been seen there
    in some valid completion?"""

    def __init__(self, positions: Iterable[tuple]):
        self.flags = {pos: [False, False] for pos in positions}

    @classmethod
    def for_graph(cls, p: MixedGraph) -> "FoundTable":
        return cls(p.circles())

    def found(self, pos: tuple, mark: Mark) -> bool:
        arrow, tail = self.flags[pos]
        return arrow if Mark(mark) == Mark.ARROW else tail

    def both(self, pos: tuple) -> bool:
        return all(self.flags[pos])

    def record(self, leaf: MixedGraph) -> None:
        """UpdateFound: mark every position with the orientation the leaf has."""
        for (x, y), f in self.flags.items():
            if leaf.mark(x, y) == Mark.ARROW:
                f[0] = True
            else:
                f[1] = True

    def invariant_marks(self) -> dict:
        """Positions where exactly one orientation was seen, with that mark."""
        out = {}
        for pos, (arrow, tail) in self.flags.items():
            if arrow != tail:
                out[pos] = Mark.ARROW if arrow else Mark.TAIL
        return out

    def items(self):
        return self.flags.items()

    def __len__(self):
        return len(self.flags)

    def __eq__(self, other):
        if not isinstance(other, FoundTable):
            return NotImplemented
        return self.flags == other.flags

    def __repr__(self):
        return f"FoundTable({len(self.flags)} positions)"


@dataclass
class PCGraph:
    """Solid PDAG/PAG plus the dashed knowledge edges it still needs."""

    solid: MixedGraph
    dashed: list = field(default_factory=list)


@dataclass
class SearchOptions:
    pruning: bool = True
    mode: GraphClass | None = None
    node_budget: int | None = None


@dataclass
class SearchStats:
    nodes_visited: int = 0
    leaves_found: int = 0
    uncertainties: int = 0
    max_depth: int = 0


def _mode_for(p: MixedGraph, opts: SearchOptions) -> GraphClass:
    mode = GraphClass(opts.mode) if opts.mode is not None else p.kind
    if mode not in (GraphClass.PDAG, GraphClass.PAG):
        raise InputError(f"search mode must be pdag or pag, not {mode.value}")
    if p.kind != mode:
        raise InputError(f"graph is a {p.kind.value.upper()} but mode is {mode.value}")
    return mode


def _constraint_indices(p: MixedGraph, k: Sequence[KnowledgeConstraint]) -> list:
    return [(p.index(c.x), p.index(c.y), c.positive) for c in k]


def _colliders(m) -> frozenset:
    return frozenset(t for t in _unshielded(m) if m[t[0]][t[1]] == ARROW and m[t[2]][t[1]] == ARROW)


def _has_circle(m) -> bool:
    return any(CIRCLE in row for row in m)


def _valid_raw(m, kc, mode, table, colliders, leaf) -> bool:
    # (1) no directed cycle; for PAGs, no almost directed cycle
    if _has_directed_cycle(m):
        return False
    if mode == GraphClass.PAG and _has_almost_directed_cycle(m):
        return False
    # (2) no constraint already violated
    if kc:
        ch = _children_masks(m)
        for i, j, positive in kc:
            if positive:
                if not _possibly_directed_reach(m, i) >> j & 1:
                    return False
            elif _closure(ch, 1 << i) >> j & 1:
                return False
    # (3) the independence model survives; only checked once no circle is left
    if leaf:
        if mode == GraphClass.PAG and table is not None:
            return _preserved_raw(table, m)
        if mode == GraphClass.PDAG and colliders is not None:
            return _colliders(m) == colliders
    return True


def valid(p: MixedGraph, k: Sequence[KnowledgeConstraint], table: SeparationTable | None,
          mode: GraphClass | str) -> bool:
    """Valid(P, K): acyclicity, no violated constraint, and (for circle-free
    PAGs) the separations of the reference are preserved."""
    mode = GraphClass(mode)
    if table is not None and table.reference.vertices != p.vertices:
        raise InputError("separation table and graph have different vertices")
    return _valid_raw(p._m, _constraint_indices(p, k), mode, table, None, not _has_circle(p._m))


def prune_rule(p: MixedGraph, found: FoundTable) -> bool:
    """True when every position's current or possible marks were all seen already."""
    for (x, y), (arrow, tail) in found.items():
        cur = p.mark(x, y)
        if cur == Mark.CIRCLE:
            if not (arrow and tail):
                return False
        elif not (arrow if cur == Mark.ARROW else tail):
            return False
    return True


def select_branch_edge(p: MixedGraph, found: FoundTable | None = None) -> tuple | None:
    """Next circle to branch on, preferring ones with an unseen orientation."""
    first = None
    for pos in p.circles():
        if first is None:
            first = pos
        if found is None:
            break
        flags = found.flags.get(pos)
        if flags is None or not all(flags):
            return pos
    return first


class _Searcher:
    """Algorithm state shared along one search: constraints, reference
    separations, the Found flags and the statistics."""

    def __init__(self, p, k, table, found, opts, stats):
        self.mode = _mode_for(p, opts)
        self.kc = _constraint_indices(p, k)
        self.table = table
        self.colliders = _colliders(p._m) if self.mode == GraphClass.PDAG else None
        self.pruning = opts.pruning
        self.budget = opts.node_budget
        self.stats = stats
        self.vertices = p.vertices
        # index positions share their flag lists with the public table
        self.flags = {}
        for (x, y), f in found.items():
            self.flags[(p.index(x), p.index(y))] = f
        self.positions = sorted(self.flags)

    def prune(self, m) -> bool:
        for (i, j) in self.positions:
            arrow, tail = self.flags[(i, j)]
            cur = m[i][j]
            if cur == CIRCLE:
                if not (arrow and tail):
                    return False
            elif not (arrow if cur == ARROW else tail):
                return False
        return True

    def select(self, m):
        first = None
        for i, row in enumerate(m):
            for j, mk in enumerate(row):
                if mk == CIRCLE:
                    f = self.flags.get((i, j))
                    if f is None or not (f[0] and f[1]):
                        return i, j
                    if first is None:
                        first = (i, j)
        return first

    def record(self, m) -> None:
        for (i, j), f in self.flags.items():
            if m[i][j] == ARROW:
                f[0] = True
            else:
                f[1] = True

    def visit(self, m, depth: int) -> bool:
        st = self.stats
        st.nodes_visited += 1
        if depth > st.max_depth:
            st.max_depth = depth
        if self.budget is not None and st.nodes_visited > self.budget:
            raise ResourceError(f"node budget of {self.budget} exhausted", partial=st)
        leaf = not _has_circle(m)
        if not _valid_raw(m, self.kc, self.mode, self.table, self.colliders, leaf):
            return False
        if self.pruning and self.positions and self.prune(m):
            return True
        if leaf:
            self.record(m)
            st.leaves_found += 1
            return True
        i, j = self.select(m)
        sat = False
        for mark in (ARROW, TAIL):
            child = [row[:] for row in m]
            ok, _ = _apply_raw(child, self.mode, i, j, mark)
            if ok:
                sat = self.visit(child, depth + 1) or sat
            else:
                # a conflicting propagation is a child whose Valid fails
                st.nodes_visited += 1
        return sat


def search(p: MixedGraph, k: Sequence[KnowledgeConstraint], table: SeparationTable | None,
           found: FoundTable, opts: SearchOptions | None = None,
           stats: SearchStats | None = None) -> bool:
    """Search(P, K): fill ``found`` and report whether any valid completion exists.

    In PAG mode ``table`` supplies the reference separations checked at the
    leaves.  In PDAG mode leaves are checked against the unshielded
    colliders of ``p`` instead.
    """
    opts = opts or SearchOptions()
    stats = stats if stats is not None else SearchStats()
    stats.uncertainties = p.num_circles()
    s = _Searcher(p, k, table, found, opts, stats)
    if s.mode == GraphClass.PAG and table is None:
        raise InputError("PAG search needs a separation table")
    return s.visit([row[:] for row in p._m], 0)


def _reference_table(p: MixedGraph, reference: MixedGraph | None) -> SeparationTable:
    from .classbuild import pag_to_mag

    ref = reference if reference is not None else pag_to_mag(p)
    if ref.vertices != p.vertices or ref.skeleton() != p.skeleton():
        raise InputError("reference MAG must share the PAG's vertices and skeleton")
    return build_separation_table(ref)


def _prepare(p, opts, reference, table):
    opts = opts or SearchOptions()
    mode = _mode_for(p, opts)
    if mode == GraphClass.PAG and table is None:
        table = _reference_table(p, reference)
    return opts, mode, table


def find_pc_graph(p: MixedGraph, k: Sequence[KnowledgeConstraint],
                  opts: SearchOptions | None = None, *,
                  reference: MixedGraph | None = None,
                  table: SeparationTable | None = None,
                  stats: SearchStats | None = None,
                  found: FoundTable | None = None):
    """Find-PC-PAG / Find-PC-PDAG.

    Returns ``(sat, pc)``; ``pc`` is None when ``p`` and ``k`` are
    inconsistent.  In PAG mode the separations are taken from ``table``, or
    from ``reference`` (any MAG of the class), or from a representative MAG
    built from ``p`` itself.
    """
    k = list(k)
    opts, mode, table = _prepare(p, opts, reference, table)
    found = found if found is not None else FoundTable.for_graph(p)
    sat = search(p, k, table, found, opts, stats)
    if not sat:
        return False, None
    solid = p.copy()
    for (x, y), mark in found.invariant_marks().items():
        solid.set_mark(x, y, mark)
    return True, PCGraph(solid, knowledge_edges(p, solid, k))


def knowledge_edges(p: MixedGraph, solid: MixedGraph, k: Sequence[KnowledgeConstraint]) -> list:
    """Constraints that need a dashed edge next to the solid graph.

    A constraint already satisfied by the input graph needs none.  A positive
    one is also dropped once the solid graph shows the directed path it
    asserts; a negative one states an absence, which solid edges never
    display, so it is kept.  Adjacent pairs never get a dashed edge: the
    solid edge between them already settles the ancestral relation.
    """
    out = []
    for c in dict.fromkeys(k):
        if solid.adjacent(c.x, c.y):
            continue
        if c.positive:
            if not has_directed_path(solid, c.x, c.y):
                out.append(c)
        elif has_possibly_directed_path(p, c.x, c.y):
            out.append(c)
    return out


def is_consistent(p: MixedGraph, k: Sequence[KnowledgeConstraint],
                  opts: SearchOptions | None = None, *,
                  reference: MixedGraph | None = None,
                  table: SeparationTable | None = None) -> bool:
    """Whether some member of the class satisfies every constraint in ``k``."""
    opts = opts or SearchOptions()
    return find_pc_graph(p, k, opts, reference=reference, table=table)[0]


def enumerate_found(p: MixedGraph, table: SeparationTable | None,
                    opts: SearchOptions | None = None,
                    stats: SearchStats | None = None) -> FoundTable:
    """Found flags over all valid completions of ``p`` with no knowledge."""
    found = FoundTable.for_graph(p)
    search(p, [], table, found, opts or SearchOptions(), stats)
    return found
