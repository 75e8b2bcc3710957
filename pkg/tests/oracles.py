"""Brute-force reference implementations used by the tests.

Nothing here shares code with the package's algorithms: paths are
enumerated explicitly, reachability comes from matrix powers, and class
members are found by trying every orientation.
"""

from __future__ import annotations

import itertools

import numpy as np

from causalpaths.graph import ARROW, CIRCLE, TAIL, GraphClass, MixedGraph

# -- ancestry ----------------------------------------------------------------


def directed_adjacency(m) -> np.ndarray:
    n = len(m)
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if m[i][j] == ARROW and m[j][i] == TAIL:
                a[i, j] = 1
    return a


def reachability(m) -> np.ndarray:
    """``r[i, j]`` true iff a directed path of length >= 1 runs from i to j."""
    a = directed_adjacency(m)
    n = len(m)
    r = np.zeros_like(a)
    power = np.eye(n, dtype=np.int64)
    for _ in range(n):
        power = np.minimum(power @ a, 1)
        r = np.maximum(r, power)
    return r.astype(bool)


def has_cycle(m) -> bool:
    return bool(np.any(np.diag(reachability(m))))


def has_almost_cycle(m) -> bool:
    r = reachability(m)
    n = len(m)
    return any(m[i][j] == ARROW and m[j][i] == ARROW and r[i, j] for i in range(n) for j in range(n))


# -- paths and m-separation ------------------------------------------------


def simple_paths(m, a, b):
    n = len(m)
    stack = [(a, (a,))]
    while stack:
        v, path = stack.pop()
        if v == b:
            yield path
            continue
        for w in range(n):
            if m[v][w] and w not in path:
                stack.append((w, path + (w,)))


def m_separated(m, a, b, z, r=None) -> bool:
    """Every simple path blocked: a non-collider in z, or a collider with no
    descendant (itself included) in z.  ``r`` is a cached reachability."""
    if r is None:
        r = reachability(m)
    n = len(m)
    anc_z = {v for v in range(n) if v in z or any(r[v, t] for t in z)}
    for path in simple_paths(m, a, b):
        open_path = True
        for k in range(1, len(path) - 1):
            prev, v, nxt = path[k - 1], path[k], path[k + 1]
            collider = m[prev][v] == ARROW and m[nxt][v] == ARROW
            if collider and v not in anc_z:
                open_path = False
                break
            if not collider and v in z:
                open_path = False
                break
        if open_path:
            return False
    return True


def independence_model(m) -> frozenset:
    """All ``(a, b, z)`` with a < b and a _||_ b | z."""
    n = len(m)
    out = set()
    for a in range(n):
        for b in range(a + 1, n):
            rest = [v for v in range(n) if v not in (a, b)]
            for k in range(len(rest) + 1):
                for z in itertools.combinations(rest, k):
                    if m_separated(m, a, b, set(z)):
                        out.add((a, b, z))
    return frozenset(out)


def equivalent_by_definition(m1, m2) -> bool:
    return independence_model(m1) == independence_model(m2)


def same_separations(m1, m2) -> bool:
    """Faster form of the definition for graphs with the same skeleton."""
    return all(x == y for x, y in zip(_profile(m1), _profile(m2)))


def is_maximal(m) -> bool:
    n = len(m)
    for a in range(n):
        for b in range(a + 1, n):
            if m[a][b]:
                continue
            rest = [v for v in range(n) if v not in (a, b)]
            if not any(m_separated(m, a, b, set(z))
                       for k in range(len(rest) + 1) for z in itertools.combinations(rest, k)):
                return False
    return True


# -- class members -----------------------------------------------------------


def _edges(m):
    n = len(m)
    return [(i, j) for i in range(n) for j in range(i + 1, n) if m[i][j]]


def unshielded_colliders(m) -> set:
    n = len(m)
    return {(x, y, z) for y in range(n) for x in range(n) for z in range(x + 1, n)
            if x != y != z and m[x][y] == ARROW and m[z][y] == ARROW and not m[x][z]}


def pdag_members(p: MixedGraph) -> list:
    """Every DAG that keeps the directed edges of a CPDAG, orients its
    undirected ones, and has exactly its unshielded colliders."""
    m = p._m
    und = [(i, j) for i, j in _edges(m) if m[i][j] == CIRCLE]
    target = unshielded_colliders(m)
    out = []
    for bits in itertools.product((0, 1), repeat=len(und)):
        d = [row[:] for row in m]
        for (i, j), b in zip(und, bits):
            if b:
                d[i][j], d[j][i] = ARROW, TAIL
            else:
                d[i][j], d[j][i] = TAIL, ARROW
        if has_cycle(d) or unshielded_colliders(d) != target:
            continue
        out.append(d)
    return out


def _profile(m):
    """Separation verdicts over non-adjacent pairs and all conditioning sets."""
    n = len(m)
    r = reachability(m)
    for a in range(n):
        for b in range(a + 1, n):
            if m[a][b]:
                continue
            rest = [v for v in range(n) if v not in (a, b)]
            for k in range(len(rest) + 1):
                for z in itertools.combinations(rest, k):
                    yield m_separated(m, a, b, set(z), r)


def pag_members(p: MixedGraph, reference) -> list:
    """Every MAG obtained by filling the circles of ``p`` that is ancestral
    and has the reference's independence model.

    ``reference`` is a mark matrix in ``p``'s vertex order.
    """
    m = p._m
    circles = [(i, j) for i in range(len(m)) for j in range(len(m)) if m[i][j] == CIRCLE]
    target = list(_profile(reference))
    colliders = unshielded_colliders(reference)
    out = []
    for bits in itertools.product((ARROW, TAIL), repeat=len(circles)):
        d = [row[:] for row in m]
        for (i, j), mk in zip(circles, bits):
            d[i][j] = mk
        if any(d[i][j] == TAIL and d[j][i] == TAIL for i, j in _edges(d)):
            continue
        if has_cycle(d) or has_almost_cycle(d):
            continue
        # equal unshielded colliders are necessary for equivalence
        if unshielded_colliders(d) != colliders:
            continue
        if all(x == y for x, y in zip(_profile(d), target)):
            out.append(d)
    return out


def skeleton_mags(skeleton_matrix) -> list:
    """Every MAG (ancestral and maximal) on the given skeleton."""
    edges = _edges(skeleton_matrix)
    n = len(skeleton_matrix)
    out = []
    for choice in itertools.product(range(3), repeat=len(edges)):
        d = [[0] * n for _ in range(n)]
        for (i, j), c in zip(edges, choice):
            d[i][j], d[j][i] = ((ARROW, TAIL), (TAIL, ARROW), (ARROW, ARROW))[c]
        if has_cycle(d) or has_almost_cycle(d) or not is_maximal(d):
            continue
        out.append(d)
    return out


def satisfies(d, constraints, vertices) -> bool:
    r = reachability(d)
    idx = {v: i for i, v in enumerate(vertices)}
    return all(bool(r[idx[c.x], idx[c.y]]) == c.positive for c in constraints)


def invariant_marks(p: MixedGraph, members) -> dict:
    """Mark at each circle position of ``p`` shared by all members (None if they differ)."""
    m = p._m
    out = {}
    for i in range(len(m)):
        for j in range(len(m)):
            if m[i][j] == CIRCLE:
                marks = {d[i][j] for d in members}
                out[(i, j)] = marks.pop() if len(marks) == 1 else None
    return out


def expected_solid(p: MixedGraph, members) -> list:
    """``p`` with every circle that all members agree on replaced."""
    out = [row[:] for row in p._m]
    for (i, j), mk in invariant_marks(p, members).items():
        if mk is not None:
            out[i][j] = mk
    return out


def max_subset_score(p_members, k_weighted, vertices) -> tuple:
    """``(score, subsets)``: best Sc over subsets S for which some member
    satisfies exactly S (every other constraint violated)."""
    best = -np.inf
    best_sets = []
    for d in p_members:
        r = reachability(d)
        idx = {v: i for i, v in enumerate(vertices)}
        sat = frozenset(i for i, w in enumerate(k_weighted)
                        if bool(r[idx[w.constraint.x], idx[w.constraint.y]]) == w.constraint.positive)
        s = sum(w.u if i in sat else w.c for i, w in enumerate(k_weighted))
        if s > best + 1e-12:
            best, best_sets = s, [sat]
        elif abs(s - best) <= 1e-12:
            best_sets.append(sat)
    return best, best_sets


def max_consistent_cardinality(p_members, constraints, vertices) -> int:
    """Largest subset of ``constraints`` jointly satisfied by one member."""
    best = -1
    n = len(constraints)
    for size in range(n, -1, -1):
        for sub in itertools.combinations(constraints, size):
            if any(satisfies(d, sub, vertices) for d in p_members):
                return size
    return best


def as_graph(vertices, m, kind=GraphClass.MAG) -> MixedGraph:
    return MixedGraph.from_matrix(vertices, m, kind)
