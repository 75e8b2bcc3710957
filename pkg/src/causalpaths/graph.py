"""Mixed graphs with three-valued edge marks.

One representation covers DAGs, MAGs, PDAGs and PAGs.  Marks are stored in
an ``n x n`` matrix where entry ``[i][j]`` is the mark at vertex ``j`` on the
edge between ``i`` and ``j`` (0 when the vertices are not adjacent).  This is
the usual "amat" convention of PAG software, so ``i -> j`` is stored as
``[i][j] = ARROW`` and ``[j][i] = TAIL``.

Undirected (tail-tail) edges are never allowed: selection variables are not
modelled.  PDAG undirected edges are stored as circle-circle.
"""

from __future__ import annotations

import enum
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .exceptions import GraphClassError, InputError

__all__ = [
    "Mark",
    "GraphClass",
    "Edge",
    "MixedGraph",
    "descendants",
    "ancestors",
    "is_ancestor",
    "has_directed_path",
    "has_possibly_directed_path",
    "has_directed_cycle",
    "has_almost_directed_cycle",
    "unshielded_triples",
    "is_collider",
    "is_definite_noncollider",
]


class Mark(enum.IntEnum):
    CIRCLE = 1
    ARROW = 2
    TAIL = 3

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def from_symbol(cls, s: str) -> "Mark":
        try:
            return _FROM_SYMBOL[s]
        except KeyError:
            raise InputError(f"unknown edge mark {s!r}") from None


_SYMBOLS = {Mark.CIRCLE: "o", Mark.ARROW: ">", Mark.TAIL: "-"}
_FROM_SYMBOL = {v: k for k, v in _SYMBOLS.items()}

NONE = 0
CIRCLE = int(Mark.CIRCLE)
ARROW = int(Mark.ARROW)
TAIL = int(Mark.TAIL)


class GraphClass(str, enum.Enum):
    DAG = "dag"
    MAG = "mag"
    PDAG = "pdag"
    PAG = "pag"


class Edge(NamedTuple):
    u: str
    v: str
    mark_u: Mark
    mark_v: Mark

    def __str__(self) -> str:
        return f"{self.u} {self.mark_u.symbol}{self.mark_v.symbol} {self.v}"


def _parse_edge_spec(spec):
    # accepts Edge-like 4-tuples or the compact string form "A -> B"
    if isinstance(spec, str):
        parts = spec.split()
        if len(parts) != 3 or len(parts[1]) != 2:
            raise InputError(f"cannot parse edge {spec!r}")
        u, marks, v = parts
        return u, v, Mark.from_symbol(marks[0]), Mark.from_symbol(marks[1])
    u, v, mu, mv = spec
    return u, v, Mark(mu), Mark(mv)


class MixedGraph:
    """A graph over named vertices whose edges carry a mark at each end.

    Parameters
    ----------
    vertices : iterable of str
        Vertex names.  Their order is the iteration and tie-breaking order
        used by every algorithm in the package.
    edges : iterable
        Either ``(u, v, mark_at_u, mark_at_v)`` tuples or strings in the text
        notation ``"A -> B"``, ``"A o> B"``, ``"A oo B"``, ``"A >> B"``.
    kind : GraphClass
        Declared class.  DAG and MAG graphs are checked for (almost) directed
        cycles; every class is checked for legal marks.
    validate : bool
        Skip all class checks when False (used for search snapshots).
    """

    __slots__ = ("_vertices", "_index", "_m", "kind")

    def __init__(self, vertices: Iterable[str], edges=(), kind=GraphClass.PAG, *, validate=True):
        self._vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self._vertices)}
        if len(self._index) != len(self._vertices):
            raise InputError("duplicate vertex names")
        n = len(self._vertices)
        self._m = [[NONE] * n for _ in range(n)]
        self.kind = GraphClass(kind)
        for spec in edges:
            u, v, mu, mv = _parse_edge_spec(spec)
            i, j = self.index(u), self.index(v)
            if i == j:
                raise InputError(f"self-loop on {u}")
            if self._m[i][j]:
                raise InputError(f"more than one edge between {u} and {v}")
            self._m[i][j] = int(mv)
            self._m[j][i] = int(mu)
        if validate:
            self.validate()

    @classmethod
    def from_matrix(cls, vertices, marks, kind=GraphClass.PAG, *, validate=True) -> "MixedGraph":
        """Build from an ``n x n`` mark matrix (``marks[i][j]`` = mark at ``j``)."""
        g = cls(vertices, (), kind, validate=False)
        arr = np.asarray(marks, dtype=np.int8)
        n = len(g._vertices)
        if arr.shape != (n, n):
            raise InputError(f"mark matrix has shape {arr.shape}, expected {(n, n)}")
        if ((arr != 0) != (arr.T != 0)).any() or arr.diagonal().any():
            raise InputError("mark matrix adjacency must be symmetric with empty diagonal")
        if ((arr < 0) | (arr > 3)).any():
            raise InputError("mark matrix entries must be in 0..3")
        g._m = arr.astype(int).tolist()
        if validate:
            g.validate()
        return g

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def to_matrix(self) -> np.ndarray:
        return np.array(self._m, dtype=np.int8).reshape(self.n, self.n)

    def mark(self, u: str, v: str) -> Mark | None:
        """Mark at ``v`` on the edge ``u *-* v``, or None if not adjacent."""
        m = self._m[self.index(u)][self.index(v)]
        return Mark(m) if m else None

    def adjacent(self, u: str, v: str) -> bool:
        return self._m[self.index(u)][self.index(v)] != NONE

    def neighbors(self, v: str) -> list:
        row = self._m[self.index(v)]
        return [self._vertices[j] for j, m in enumerate(row) if m]

    def edges(self) -> list:
        """Edges in index order, each listed once with ``u`` before ``v``."""
        out = []
        for i in range(self.n):
            row = self._m[i]
            for j in range(i + 1, self.n):
                if row[j]:
                    out.append(Edge(self._vertices[i], self._vertices[j],
                                    Mark(self._m[j][i]), Mark(row[j])))
        return out

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges())

    def num_edges(self) -> int:
        return sum(1 for i in range(self.n) for j in range(i + 1, self.n) if self._m[i][j])

    def skeleton(self) -> frozenset:
        return frozenset(frozenset((e.u, e.v)) for e in self.edges())

    def circles(self) -> list:
        """Positions ``(x, y)`` whose mark at ``y`` on edge ``x *-o y`` is a circle."""
        out = []
        for i in range(self.n):
            row = self._m[i]
            for j in range(self.n):
                if row[j] == CIRCLE:
                    out.append((self._vertices[i], self._vertices[j]))
        return out

    def num_circles(self) -> int:
        return sum(row.count(CIRCLE) for row in self._m)

    # -- mutation on private snapshots ------------------------------------

    def copy(self) -> "MixedGraph":
        g = MixedGraph.__new__(MixedGraph)
        g._vertices = self._vertices
        g._index = self._index
        g._m = [row[:] for row in self._m]
        g.kind = self.kind
        return g

    def with_kind(self, kind, *, validate=True) -> "MixedGraph":
        g = self.copy()
        g.kind = GraphClass(kind)
        if validate:
            g.validate()
        return g

    def set_mark(self, u: str, v: str, mark: Mark) -> None:
        """Set the mark at ``v`` on the existing edge ``u *-* v`` in place."""
        i, j = self.index(u), self.index(v)
        if not self._m[i][j]:
            raise InputError(f"{u} and {v} are not adjacent")
        self._m[i][j] = int(Mark(mark))

    def set_edge(self, u: str, v: str, mark_u: Mark, mark_v: Mark) -> None:
        i, j = self.index(u), self.index(v)
        if not self._m[i][j]:
            raise InputError(f"{u} and {v} are not adjacent")
        self._m[i][j] = int(mark_v)
        self._m[j][i] = int(mark_u)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (self._vertices == other._vertices and self.kind == other.kind
                and self._m == other._m)

    def __hash__(self):
        return hash((self._vertices, self.kind, tuple(map(tuple, self._m))))

    def same_marks(self, other: "MixedGraph") -> bool:
        return self._vertices == other._vertices and self._m == other._m

    def __repr__(self):
        body = ", ".join(str(e) for e in self.edges())
        return f"MixedGraph({self.kind.value}: {body})"

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        """Raise GraphClassError if the marks are illegal for ``self.kind``."""
        kind = self.kind
        for e in self.edges():
            mu, mv = e.mark_u, e.mark_v
            if mu == Mark.TAIL and mv == Mark.TAIL:
                raise GraphClassError(f"undirected edge {e} (selection variables are not supported)")
            if kind in (GraphClass.DAG, GraphClass.MAG) and Mark.CIRCLE in (mu, mv):
                raise GraphClassError(f"circle mark on {e} in a {kind.value.upper()}")
            if kind == GraphClass.DAG and mu == mv == Mark.ARROW:
                raise GraphClassError(f"bi-directed edge {e} in a DAG")
            if kind == GraphClass.PDAG:
                ok = (mu == mv == Mark.CIRCLE) or {mu, mv} == {Mark.TAIL, Mark.ARROW}
                if not ok:
                    raise GraphClassError(f"edge {e} is neither directed nor undirected in a PDAG")
        if kind in (GraphClass.DAG, GraphClass.MAG):
            if has_directed_cycle(self):
                raise GraphClassError(f"directed cycle in a {kind.value.upper()}")
            if kind == GraphClass.MAG and has_almost_directed_cycle(self):
                raise GraphClassError("almost directed cycle in a MAG")


# -- low level helpers on mark matrices --------------------------------------
#
# Reachability uses Python ints as bitsets over vertex indices.


def _children_masks(m) -> list:
    n = len(m)
    out = [0] * n
    for i in range(n):
        row = m[i]
        mask = 0
        for j in range(n):
            if row[j] == ARROW and m[j][i] == TAIL:
                mask |= 1 << j
        out[i] = mask
    return out


def _parents_masks(m) -> list:
    n = len(m)
    out = [0] * n
    for i in range(n):
        mask = 0
        for j in range(n):
            if m[j][i] == ARROW and m[i][j] == TAIL:
                mask |= 1 << j
        out[i] = mask
    return out


def _closure(masks, start: int) -> int:
    """Bitset of vertices reachable from the bitset ``start`` (inclusive)."""
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _descendant_mask(m, i: int) -> int:
    return _closure(_children_masks(m), 1 << i)


def _ancestor_mask(m, targets: int) -> int:
    return _closure(_parents_masks(m), targets)


def _has_directed_cycle(m) -> bool:
    # Kahn's algorithm over the fully directed part
    n = len(m)
    ch = _children_masks(m)
    indeg = [0] * n
    for i in range(n):
        for j in _bits(ch[i]):
            indeg[j] += 1
    stack = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while stack:
        i = stack.pop()
        seen += 1
        for j in _bits(ch[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    return seen != n


def _has_almost_directed_cycle(m) -> bool:
    n = len(m)
    ch = None
    for i in range(n):
        row = m[i]
        for j in range(i + 1, n):
            if row[j] == ARROW and m[j][i] == ARROW:
                if ch is None:
                    ch = _children_masks(m)
                if _closure(ch, 1 << i) >> j & 1 or _closure(ch, 1 << j) >> i & 1:
                    return True
    return False


def _possibly_directed_reach(m, i: int) -> int:
    """Bitset reachable from ``i`` along edges not into the near end and not
    out of (tail at) the far end."""
    n = len(m)
    seen = 1 << i
    stack = [i]
    while stack:
        a = stack.pop()
        for b in range(n):
            mb = m[a][b]
            if mb and mb != TAIL and m[b][a] != ARROW and not seen >> b & 1:
                seen |= 1 << b
                stack.append(b)
    return seen


# -- public path and cycle queries -------------------------------------------


def descendants(g: MixedGraph, x: str) -> set:
    """``x`` together with every vertex reachable by a directed path from it."""
    i = g.index(x)
    return {g.vertices[j] for j in _bits(_descendant_mask(g._m, i))}


def ancestors(g: MixedGraph, x: str) -> set:
    """``x`` together with every vertex that has a directed path into it."""
    i = g.index(x)
    return {g.vertices[j] for j in _bits(_ancestor_mask(g._m, 1 << i))}


def is_ancestor(g: MixedGraph, a: str, b: str) -> bool:
    """Reflexive: every vertex is its own ancestor."""
    i, j = g.index(a), g.index(b)
    return bool(_descendant_mask(g._m, i) >> j & 1)


def has_directed_path(g: MixedGraph, x: str, y: str) -> bool:
    """Strict directed path ``x -> ... -> y`` over fully directed edges."""
    i, j = g.index(x), g.index(y)
    if i == j:
        return False
    return bool(_descendant_mask(g._m, i) >> j & 1)


def has_possibly_directed_path(g: MixedGraph, x: str, y: str) -> bool:
    """Whether some path from ``x`` to ``y`` has no edge pointing back.

    Every edge ``V_i *-* V_{i+1}`` on the path must have a non-arrowhead at
    ``V_i`` and a non-tail at ``V_{i+1}``.  This is a local criterion; it can
    accept paths that no completion of the circles turns into a directed
    path, but it never rejects one that some completion does.
    """
    i, j = g.index(x), g.index(y)
    if i == j:
        raise InputError("possibly-directed path needs two distinct vertices")
    return bool(_possibly_directed_reach(g._m, i) >> j & 1)


def has_directed_cycle(g: MixedGraph) -> bool:
    return _has_directed_cycle(g._m)


def has_almost_directed_cycle(g: MixedGraph) -> bool:
    """Some ``A <-> B`` with ``A`` an ancestor of ``B`` (or the reverse)."""
    return _has_almost_directed_cycle(g._m)


def _unshielded(m) -> list:
    n = len(m)
    out = []
    for y in range(n):
        nb = [i for i in range(n) if m[y][i]]
        for a in range(len(nb)):
            x = nb[a]
            for b in range(a + 1, len(nb)):
                z = nb[b]
                if not m[x][z]:
                    out.append((x, y, z))
    return out


def unshielded_triples(g: MixedGraph) -> list:
    """Triples ``(x, y, z)`` with ``x - y - z`` and ``x, z`` not adjacent.

    Each triple appears once, with ``x`` before ``z`` in vertex order.
    """
    vs = g.vertices
    return sorted(((vs[x], vs[y], vs[z]) for x, y, z in _unshielded(g._m)),
                  key=lambda t: (g.index(t[0]), g.index(t[1]), g.index(t[2])))


def _check_triple(g, x, y, z):
    i, j, k = g.index(x), g.index(y), g.index(z)
    if i == k:
        raise InputError("triple endpoints must differ")
    if not g._m[i][j] or not g._m[j][k]:
        raise InputError(f"<{x}, {y}, {z}> is not a path")
    return i, j, k


def is_collider(g: MixedGraph, x: str, y: str, z: str) -> bool:
    i, j, k = _check_triple(g, x, y, z)
    return g._m[i][j] == ARROW and g._m[k][j] == ARROW


def is_definite_noncollider(g: MixedGraph, x: str, y: str, z: str) -> bool:
    """Unshielded triple with a tail at ``y`` on one of its two edges."""
    i, j, k = _check_triple(g, x, y, z)
    if g._m[i][k]:
        return False
    return g._m[i][j] == TAIL or g._m[k][j] == TAIL
