"""m-separation, Markov equivalence of MAGs and separating-set tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .exceptions import GraphClassError, InputError, InvariantError
from .graph import (
    ARROW,
    CIRCLE,
    TAIL,
    MixedGraph,
    _ancestor_mask,
    _has_almost_directed_cycle,
    _has_directed_cycle,
)

__all__ = [
    "SeparationWitness",
    "SeparationTable",
    "is_m_separated",
    "markov_equivalent",
    "build_separation_table",
    "separations_preserved",
]


def _require_mag(g: MixedGraph) -> None:
    if any(CIRCLE in row for row in g._m):
        raise GraphClassError("m-separation needs a graph without circle marks")


def _neighbor_lists(m) -> list:
    n = len(m)
    return [[j for j in range(n) if m[i][j]] for i in range(n)]


def _connected_mask(m, nbrs, a: int, z: int, anz: int) -> int:
    """Vertices joined to ``a`` by an m-connecting walk given ``z``.

    ``anz`` is the ancestor closure of ``z``.  The search runs over
    (vertex, arrived-with-arrowhead) states, so it is linear in the number
    of edges rather than in the number of paths.
    """
    seen_into = 0
    seen_out = 0
    reached = 0
    stack = []
    for w in nbrs[a]:
        stack.append((w, m[a][w] == ARROW))
    while stack:
        v, into = stack.pop()
        bit = 1 << v
        if into:
            if seen_into & bit:
                continue
            seen_into |= bit
        else:
            if seen_out & bit:
                continue
            seen_out |= bit
        reached |= bit
        row = m[v]
        for w in nbrs[v]:
            if into and m[w][v] == ARROW:
                if not anz & bit:
                    continue
            elif z & bit:
                continue
            stack.append((w, row[w] == ARROW))
    return reached & ~(1 << a)


def is_m_separated(m: MixedGraph, a: str, b: str, z: Iterable[str] = ()) -> bool:
    """True iff every path between ``a`` and ``b`` is blocked given ``z``.

    A path is blocked by a non-collider in ``z`` or by a collider that is
    not an ancestor of any member of ``z``.
    """
    _require_mag(m)
    i, j = m.index(a), m.index(b)
    zs = {m.index(v) for v in z}
    if i == j or i in zs or j in zs:
        raise InputError("a, b and z must be pairwise disjoint")
    zmask = 0
    for k in zs:
        zmask |= 1 << k
    anz = _ancestor_mask(m._m, zmask)
    reach = _connected_mask(m._m, _neighbor_lists(m._m), i, zmask, anz)
    return not reach >> j & 1


def _aligned(g: MixedGraph, order: tuple) -> list:
    if g.vertices == order:
        return g._m
    if set(g.vertices) != set(order) or len(g.vertices) != len(order):
        raise InputError("graphs have different vertex sets")
    idx = [g.index(v) for v in order]
    return [[g._m[i][j] for j in idx] for i in idx]


def _nonadjacent_after(m) -> list:
    n = len(m)
    out = []
    for a in range(n):
        mask = 0
        for b in range(a + 1, n):
            if not m[a][b]:
                mask |= 1 << b
        out.append(mask)
    return out


def _profile_rows(m, nonadj) -> Iterator[tuple]:
    """For each conditioning set (as bitmask, in increasing order) yield the
    m-connected non-adjacent partners of every vertex outside it."""
    n = len(m)
    nbrs = _neighbor_lists(m)
    active = [a for a in range(n) if nonadj[a]]
    for z in range(1 << n):
        anz = _ancestor_mask(m, z)
        row = []
        for a in active:
            if z >> a & 1:
                continue
            targets = nonadj[a] & ~z
            if not targets:
                continue
            row.append(_connected_mask(m, nbrs, a, z, anz) & targets)
        yield tuple(row)


def _same_skeleton(m1, m2) -> bool:
    n = len(m1)
    return all((m1[i][j] != 0) == (m2[i][j] != 0) for i in range(n) for j in range(i + 1, n))


def _equivalent_rows(rows1: Iterable[tuple], rows2: Iterable[tuple]) -> bool:
    return all(r1 == r2 for r1, r2 in zip(rows1, rows2))


def _unshielded_colliders(m) -> set:
    n = len(m)
    out = set()
    for y in range(n):
        into = [x for x in range(n) if m[x][y] == ARROW]
        for x, z in combinations(into, 2):
            if not m[x][z]:
                out.add((x, y, z))
    return out


def _discriminating_paths(m) -> list:
    """Every discriminating path ``(x, q1, ..., qk, v, y)`` in ``m``, listed
    from ``v`` outwards as ``(v, y, (q1, ..., qk, x))``.

    On such a path ``x`` and ``y`` are not adjacent and every ``qi`` is a
    collider on the path and a parent of ``y``.
    """
    n = len(m)
    out = []
    for y in range(n):
        for v in range(n):
            if not m[v][y]:
                continue
            for q in range(n):
                if q in (v, y) or not m[y][q] or m[v][q] != ARROW:
                    continue
                if m[q][y] != ARROW or m[y][q] != TAIL:
                    continue
                stack = [((q,), (1 << v) | (1 << y) | (1 << q))]
                while stack:
                    tail, used = stack.pop()
                    last = tail[-1]
                    for r in range(n):
                        if used >> r & 1 or m[r][last] != ARROW:
                            continue
                        if not m[r][y]:
                            out.append((v, y, tail + (r,)))
                        elif m[r][y] == ARROW and m[y][r] == TAIL and m[last][r] == ARROW:
                            stack.append((tail + (r,), used | (1 << r)))
    return out


def _discriminates(m, path) -> bool:
    v, y, rest = path
    prev = v
    for q in rest[:-1]:
        if m[prev][q] != ARROW or m[q][y] != ARROW or m[y][q] != TAIL:
            return False
        prev = q
    x = rest[-1]
    for q, nxt in zip(rest[:-1], rest[1:]):
        if m[nxt][q] != ARROW:
            return False
    return not m[x][y]


def _collider_at(m, path) -> bool:
    v, y, rest = path
    return m[rest[0]][v] == ARROW and m[y][v] == ARROW


def _graphically_equivalent(a, b, paths_a=None) -> bool:
    """Same skeleton assumed.  Same unshielded colliders, and the same
    collider status at ``v`` on every path discriminating for ``v`` in both
    graphs; for MAGs this is equivalent to sharing every m-separation."""
    if _unshielded_colliders(a) != _unshielded_colliders(b):
        return False
    if paths_a is None:
        paths_a = _discriminating_paths(a)
    for path in paths_a:
        if _discriminates(b, path) and _collider_at(a, path) != _collider_at(b, path):
            return False
    return True


def markov_equivalent(m1: MixedGraph, m2: MixedGraph, method: str = "graphical") -> bool:
    """Whether two MAGs share every m-separation ``a _||_ b | z``.

    Only pairs that are non-adjacent matter: in a MAG adjacent vertices are
    never separated and non-adjacent ones always are by some set, so a
    skeleton mismatch already decides the answer.  ``method="graphical"``
    compares colliders and discriminating paths; ``method="profile"``
    compares m-connection under every conditioning set (exponential).
    """
    _require_mag(m1)
    _require_mag(m2)
    a = m1._m
    b = _aligned(m2, m1.vertices)
    if not _same_skeleton(a, b):
        return False
    if method == "graphical":
        return _graphically_equivalent(a, b)
    if method != "profile":
        raise InputError(f"unknown method {method!r}")
    nonadj = _nonadjacent_after(a)
    return _equivalent_rows(_profile_rows(a, nonadj), _profile_rows(b, nonadj))


@dataclass(frozen=True)
class SeparationWitness:
    a: str
    b: str
    z: frozenset

    def __str__(self):
        zs = " ".join(sorted(self.z))
        return f"{self.a} {self.b} | {zs}".rstrip()


@dataclass
class SeparationTable:
    """One separating set per missing edge of a reference MAG.

    The reference is kept so that candidates can also be checked for full
    Markov equivalence; what that check needs from the reference is
    computed once and cached.
    """

    reference: MixedGraph
    witnesses: dict = field(default_factory=dict)
    _rows: list | None = field(default=None, repr=False, compare=False)
    _paths: list | None = field(default=None, repr=False, compare=False)

    def __getitem__(self, pair):
        return self.witnesses[frozenset(pair)]

    def __len__(self):
        return len(self.witnesses)

    def __iter__(self):
        return iter(self.witnesses.values())

    def reference_rows(self) -> list:
        if self._rows is None:
            m = self.reference._m
            self._rows = list(_profile_rows(m, _nonadjacent_after(m)))
        return self._rows

    def reference_paths(self) -> list:
        if self._paths is None:
            self._paths = _discriminating_paths(self.reference._m)
        return self._paths


def _subsets_by_size(items: list) -> Iterator[tuple]:
    for k in range(len(items) + 1):
        yield from combinations(items, k)


def build_separation_table(m_ref: MixedGraph) -> SeparationTable:
    """Smallest-first, then lexicographic, separating set for every missing edge."""
    _require_mag(m_ref)
    m = m_ref._m
    n = m_ref.n
    nbrs = _neighbor_lists(m)
    table = SeparationTable(reference=m_ref)
    vs = m_ref.vertices
    for a in range(n):
        for b in range(a + 1, n):
            if m[a][b]:
                continue
            others = [k for k in range(n) if k not in (a, b)]
            for zs in _subsets_by_size(others):
                zmask = 0
                for k in zs:
                    zmask |= 1 << k
                reach = _connected_mask(m, nbrs, a, zmask, _ancestor_mask(m, zmask))
                if not reach >> b & 1:
                    table.witnesses[frozenset((vs[a], vs[b]))] = SeparationWitness(
                        vs[a], vs[b], frozenset(vs[k] for k in zs))
                    break
            else:
                raise InvariantError(
                    f"no separating set for missing edge {vs[a]} - {vs[b]}; input is not a MAG")
    return table


def _witnesses_hold(table: SeparationTable, m) -> bool:
    g = table.reference
    nbrs = _neighbor_lists(m)
    for w in table.witnesses.values():
        i, j = g.index(w.a), g.index(w.b)
        zmask = 0
        for v in w.z:
            zmask |= 1 << g.index(v)
        if _connected_mask(m, nbrs, i, zmask, _ancestor_mask(m, zmask)) >> j & 1:
            return False
    return True


def separations_preserved(table: SeparationTable, m: MixedGraph) -> bool:
    """Stored witnesses still separate in ``m`` and ``m`` is equivalent to the
    table's reference MAG.  The witness pass is only a fast rejection."""
    _require_mag(m)
    ref = table.reference
    cand = _aligned(m, ref.vertices)
    if not _same_skeleton(ref._m, cand):
        raise InputError("candidate MAG has a different skeleton from the table's reference")
    if _has_directed_cycle(cand) or _has_almost_directed_cycle(cand):
        return False
    return _preserved_raw(table, cand)


def table_to_text(table: SeparationTable) -> str:
    """Sidecar text: one ``sepset A B | Z1 Z2`` line per missing edge."""
    lines = [f"sepset {w}" for w in sorted(
        table.witnesses.values(), key=lambda w: (table.reference.index(w.a), table.reference.index(w.b)))]
    return "\n".join(lines) + ("\n" if lines else "")


def table_from_text(text: str, reference: MixedGraph) -> SeparationTable:
    table = SeparationTable(reference=reference)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, tail = line.partition("|")
        parts = head.split()
        if len(parts) != 3 or parts[0] != "sepset":
            raise InputError(f"line {lineno}: expected 'sepset A B | Z...'")
        a, b = parts[1], parts[2]
        z = frozenset(tail.split())
        for v in (a, b, *z):
            reference.index(v)
        if reference.adjacent(a, b):
            raise InputError(f"line {lineno}: {a} and {b} are adjacent in the reference")
        table.witnesses[frozenset((a, b))] = SeparationWitness(a, b, z)
    return table


def _preserved_raw(table: SeparationTable, m) -> bool:
    """separations_preserved on an ancestral mark matrix in the reference's
    vertex order, with the skeleton assumed equal.

    Once the witnesses hold, every missing edge of ``m`` has a separating
    set, so ``m`` is maximal and the graphical test is exact.
    """
    if not _witnesses_hold(table, m):
        return False
    return _graphically_equivalent(table.reference._m, m, table.reference_paths())
