"""Constructors for equivalence-class graphs.

DAG -> CPDAG, DAG with hidden vertices -> MAG, MAG -> PAG, and back from a
PAG to one representative MAG.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .exceptions import GraphClassError, InputError, InvariantError, ResourceError
from .graph import (
    ARROW,
    CIRCLE,
    TAIL,
    GraphClass,
    MixedGraph,
    _ancestor_mask,
    _descendant_mask,
    _unshielded,
)
from .propagation import meek_closure

__all__ = [
    "LatentSpec",
    "dag_to_cpdag",
    "dag_to_mag",
    "latent_project",
    "mag_to_pag",
    "pag_to_mag",
]

DEFAULT_MAX_POSITIONS = 20


@dataclass(frozen=True)
class LatentSpec:
    hidden: frozenset

    def __init__(self, hidden: Iterable[str]):
        object.__setattr__(self, "hidden", frozenset(hidden))


def _require(g: MixedGraph, kind: GraphClass) -> None:
    if g.kind != kind:
        raise GraphClassError(f"expected a {kind.value.upper()}, got a {g.kind.value.upper()}")


def dag_to_cpdag(d: MixedGraph) -> MixedGraph:
    """Completed PDAG: v-structures kept, Meek closure, everything else undirected."""
    _require(d, GraphClass.DAG)
    m = d._m
    n = d.n
    out = [[CIRCLE if m[i][j] else 0 for j in range(n)] for i in range(n)]
    for x, y, z in _unshielded(m):
        if m[x][y] == ARROW and m[z][y] == ARROW:
            out[x][y] = out[z][y] = ARROW
            out[y][x] = out[y][z] = TAIL
    p = MixedGraph.from_matrix(d.vertices, out, GraphClass.PDAG)
    res = meek_closure(p)
    if not res.ok:
        raise InvariantError("Meek closure of a DAG's pattern reported a conflict")
    return res.graph


def dag_to_mag(d: MixedGraph) -> MixedGraph:
    _require(d, GraphClass.DAG)
    return d.with_kind(GraphClass.MAG)


def _inducing_path_exists(m, a: int, b: int, hidden: int, anc_ab: int) -> bool:
    """Depth-first search over simple paths from ``a`` to ``b`` on which every
    observed interior vertex is a collider and every collider is an ancestor
    of ``a`` or ``b``."""
    n = len(m)
    # stack entries: (vertex, arrived with arrowhead, visited bitset)
    stack = [(w, m[a][w] == ARROW, (1 << a) | (1 << w)) for w in range(n) if m[a][w]]
    while stack:
        v, into, visited = stack.pop()
        if v == b:
            return True
        bit = 1 << v
        for w in range(n):
            if not m[v][w] or visited >> w & 1:
                continue
            collider = into and m[w][v] == ARROW
            if collider:
                if not anc_ab & bit:
                    continue
            elif not hidden & bit:
                continue
            stack.append((w, m[v][w] == ARROW, visited | (1 << w)))
    return False


def latent_project(d: MixedGraph, spec: LatentSpec | Iterable[str]) -> MixedGraph:
    """MAG over the observed vertices of ``d``.

    Observed ``a`` and ``b`` are adjacent iff ``d`` has an inducing path
    between them relative to the hidden set.  Adjacent pairs get ``a -> b``
    when ``a`` is an ancestor of ``b`` in ``d``, and ``a <-> b`` when neither
    is an ancestor of the other.
    """
    _require(d, GraphClass.DAG)
    if not isinstance(spec, LatentSpec):
        spec = LatentSpec(spec)
    for h in spec.hidden:
        d.index(h)
    m = d._m
    hidden = 0
    for h in spec.hidden:
        hidden |= 1 << d.index(h)
    observed = [i for i in range(d.n) if not hidden >> i & 1]
    desc = [_descendant_mask(m, i) for i in range(d.n)]
    k = len(observed)
    out = [[0] * k for _ in range(k)]
    for p in range(k):
        a = observed[p]
        for q in range(p + 1, k):
            b = observed[q]
            anc_ab = _ancestor_mask(m, (1 << a) | (1 << b))
            if not _inducing_path_exists(m, a, b, hidden, anc_ab):
                continue
            if desc[a] >> b & 1:
                out[p][q], out[q][p] = ARROW, TAIL
            elif desc[b] >> a & 1:
                out[p][q], out[q][p] = TAIL, ARROW
            else:
                out[p][q] = out[q][p] = ARROW
    names = [d.vertices[i] for i in observed]
    try:
        return MixedGraph.from_matrix(names, out, GraphClass.MAG)
    except GraphClassError as exc:
        raise InvariantError(f"latent projection is not a MAG: {exc}") from exc


def mag_to_pag(m: MixedGraph, max_positions: int | None = DEFAULT_MAX_POSITIONS) -> MixedGraph:
    """PAG of the Markov equivalence class of ``m``.

    Every MAG with the skeleton of ``m`` is a candidate; a mark is kept iff
    all candidates equivalent to ``m`` carry it.  The candidates are
    enumerated by the same backtracking search used for knowledge
    incorporation (with an empty knowledge set), started from the skeleton
    with circles everywhere except at the arrowheads of unshielded
    colliders, which every equivalent MAG shares.  Each leaf is checked for
    full Markov equivalence with ``m``.

    ``max_positions`` caps the number of undetermined marks in that start
    graph; ``None`` disables the cap.
    """
    # local import: incorporate depends on this module for representatives
    from .incorporate import SearchOptions, enumerate_found
    from .separation import build_separation_table

    _require(m, GraphClass.MAG)
    mm = m._m
    n = m.n
    start = [[CIRCLE if mm[i][j] else 0 for j in range(n)] for i in range(n)]
    for x, y, z in _unshielded(mm):
        if mm[x][y] == ARROW and mm[z][y] == ARROW:
            start[x][y] = start[z][y] = ARROW
    p0 = MixedGraph.from_matrix(m.vertices, start, GraphClass.PAG, validate=False)
    u = p0.num_circles()
    if max_positions is not None and u > max_positions:
        raise ResourceError(
            f"MAG has {u} undetermined mark positions, above the enumeration cap of {max_positions}")
    table = build_separation_table(m)
    found = enumerate_found(p0, table, SearchOptions(pruning=True, mode=GraphClass.PAG))
    out = [row[:] for row in start]
    for (x, y), (arrow, tail) in found.items():
        i, j = m.index(x), m.index(y)
        if arrow and not tail:
            out[i][j] = ARROW
        elif tail and not arrow:
            out[i][j] = TAIL
        elif not arrow and not tail:
            raise InvariantError("mark position never realised; the MAG is not in its own class")
    if any(out[i][j] != mm[i][j] and out[i][j] != CIRCLE for i in range(n) for j in range(n)):
        raise InvariantError("PAG disagrees with the MAG it was built from")
    return MixedGraph.from_matrix(m.vertices, out, GraphClass.PAG)


def _mcs_order(vertices: list, adj: dict) -> list:
    """Maximum cardinality search order (ties by smallest index)."""
    weight = {v: 0 for v in vertices}
    order = []
    remaining = set(vertices)
    while remaining:
        v = max(sorted(remaining), key=lambda x: weight[x])
        order.append(v)
        remaining.discard(v)
        for w in adj[v]:
            if w in remaining:
                weight[w] += 1
    return order


def pag_to_mag(p: MixedGraph) -> MixedGraph:
    """One MAG represented by a complete PAG.

    ``o->`` edges become ``->``; the edges with circles at both ends are
    oriented along a maximum cardinality search order, which introduces no
    unshielded colliders when that part of the graph is chordal.
    """
    _require(p, GraphClass.PAG)
    pm = [row[:] for row in p._m]
    n = p.n
    for i in range(n):
        for j in range(n):
            if pm[i][j] == CIRCLE and pm[j][i] != CIRCLE:
                pm[i][j] = TAIL if pm[j][i] == ARROW else ARROW
    comp = {i: [j for j in range(n) if pm[i][j] == CIRCLE and pm[j][i] == CIRCLE] for i in range(n)}
    order = _mcs_order([i for i in range(n) if comp[i]], comp)
    pos = {v: k for k, v in enumerate(order)}
    for i in order:
        for j in comp[i]:
            if pos[i] < pos[j]:
                pm[i][j], pm[j][i] = ARROW, TAIL
    try:
        mag = MixedGraph.from_matrix(p.vertices, pm, GraphClass.MAG)
    except GraphClassError as exc:
        raise InputError(f"graph is not a valid PAG: {exc}") from exc
    colliders_p = {t for t in _unshielded(p._m) if p._m[t[0]][t[1]] == ARROW and p._m[t[2]][t[1]] == ARROW}
    colliders_m = {t for t in _unshielded(pm) if pm[t[0]][t[1]] == ARROW and pm[t[2]][t[1]] == ARROW}
    if colliders_p != colliders_m:
        raise InputError("graph is not a valid PAG: its circle component is not chordal")
    return mag
