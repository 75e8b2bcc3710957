"""Orientation propagation: Meek's rules for PDAGs, FCI R1-R3 for PAGs.

Both closures only ever replace circles.  When a rule needs to put a mark
where a different non-circle mark already sits, the closure stops and
reports a conflict; callers treat that as "this branch has no completion".

Rule statements used here (``*`` is any mark):

Meek, on PDAGs (``-`` undirected):
  R1  a -> b - c, a and c not adjacent          =>  b -> c
  R2  a -> c -> b, a - b                        =>  a -> b
  R3  a - c -> b, a - d -> b, a - b, c, d not adjacent  =>  a -> b
  R4  a - d -> c -> b, a - b, a adjacent to c, b and d not adjacent  =>  a -> b

FCI, on PAGs:
  R1  a *-> b o-* c, a and c not adjacent       =>  b -> c
  R2  (a -> b *-> c or a *-> b -> c), a *-o c   =>  a *-> c
  R3  a *-> b <-* c, a *-o d o-* c, a and c not adjacent, d *-o b  =>  d *-> b

PAG closures also turn a circle facing a tail into an arrowhead, since
tail-tail edges (selection variables) are excluded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .exceptions import GraphClassError, InputError
from .graph import ARROW, CIRCLE, TAIL, GraphClass, Mark, MixedGraph, _bits

__all__ = [
    "OrientationAssignment",
    "PropagationOutcome",
    "apply_orientation",
    "meek_closure",
    "fci_closure",
    "closure",
]


class OrientationAssignment(NamedTuple):
    """Mark ``mark`` placed at ``y`` on the edge ``x *-* y``."""

    x: str
    y: str
    mark: Mark

    def __str__(self):
        return f"{self.x} *-{self.mark.symbol} {self.y}"


@dataclass
class PropagationOutcome:
    graph: MixedGraph | None
    applied: list = field(default_factory=list)
    conflict: OrientationAssignment | None = None

    @property
    def ok(self) -> bool:
        return self.conflict is None


class _Conflict(Exception):
    pass


class _Marks:
    """Mark matrix plus per-mark bitsets, kept in sync on every write.

    ``at[k][j]`` has bit ``i`` set iff ``m[i][j] == k`` (mark ``k`` at ``j``);
    ``out[k][i]`` has bit ``j`` set iff the same holds.
    """

    __slots__ = ("m", "n", "at", "out", "adj", "log")

    def __init__(self, m):
        self.m = m
        n = self.n = len(m)
        self.at = {k: [0] * n for k in (CIRCLE, ARROW, TAIL)}
        self.out = {k: [0] * n for k in (CIRCLE, ARROW, TAIL)}
        self.adj = [0] * n
        for i in range(n):
            row = m[i]
            for j in range(n):
                k = row[j]
                if k:
                    self.at[k][j] |= 1 << i
                    self.out[k][i] |= 1 << j
                    self.adj[i] |= 1 << j
        self.log = []

    def set(self, i, j, k) -> bool:
        cur = self.m[i][j]
        if cur == k:
            return False
        if cur != CIRCLE:
            self.log.append((i, j, k))
            raise _Conflict
        self.m[i][j] = k
        bi, bj = 1 << i, 1 << j
        self.at[cur][j] &= ~bi
        self.out[cur][i] &= ~bj
        self.at[k][j] |= bi
        self.out[k][i] |= bj
        self.log.append((i, j, k))
        return True

    def orient(self, i, j) -> bool:
        """Make ``i -> j``."""
        a = self.set(i, j, ARROW)
        b = self.set(j, i, TAIL)
        return a or b

    # derived neighbourhoods
    def undirected(self, i) -> int:
        return self.out[CIRCLE][i] & self.at[CIRCLE][i]

    def parents(self, j) -> int:
        return self.at[ARROW][j] & self.out[TAIL][j]

    def children(self, i) -> int:
        return self.out[ARROW][i] & self.at[TAIL][i]


def _meek_step(s: _Marks, order) -> bool:
    adj = s.adj
    # R1
    for b in order:
        pa = s.parents(b)
        if not pa:
            continue
        for c in _bits(s.undirected(b)):
            if pa & ~adj[c] & ~(1 << c):
                s.orient(b, c)
                return True
    for a in order:
        und = s.undirected(a)
        for b in _bits(und):
            pb = s.parents(b)
            # R2
            if s.children(a) & pb:
                s.orient(a, b)
                return True
            # R3
            cand = und & pb
            for c in _bits(cand):
                if cand & ~adj[c] & ~(1 << c):
                    s.orient(a, b)
                    return True
            # R4
            for c in _bits(pb & adj[a]):
                if s.parents(c) & und & ~adj[b] & ~(1 << b):
                    s.orient(a, b)
                    return True
    return False


def _fci_step(s: _Marks, order) -> bool:
    adj = s.adj
    at, out = s.at, s.out
    # no tail-tail edges: a circle opposite a tail becomes an arrowhead
    for j in order:
        for i in _bits(at[TAIL][j]):
            if s.m[j][i] != ARROW:
                s.set(j, i, ARROW)
                return True
    # R1
    for b in order:
        into = at[ARROW][b]
        if not into:
            continue
        for c in _bits(at[CIRCLE][b]):
            if into & ~adj[c] & ~(1 << c):
                s.set(c, b, TAIL)
                s.set(b, c, ARROW)
                return True
    # R2
    for c in order:
        for a in _bits(at[CIRCLE][c]):
            via = (s.children(a) & at[ARROW][c]) | (out[ARROW][a] & s.parents(c))
            if via:
                s.set(a, c, ARROW)
                return True
    # R3
    for b in order:
        into = at[ARROW][b]
        if not into:
            continue
        for d in _bits(at[CIRCLE][b]):
            cand = into & at[CIRCLE][d]
            for a in _bits(cand):
                if cand & ~adj[a] & ~(1 << a):
                    s.set(d, b, ARROW)
                    return True
    return False


def _run(m, step, order=None) -> tuple:
    """Close the matrix ``m`` in place; return (ok, log of writes)."""
    s = _Marks(m)
    if order is None:
        order = range(s.n)
    try:
        while step(s, order):
            pass
    except _Conflict:
        return False, s.log
    return True, s.log


def _outcome(g: MixedGraph, ok: bool, log, prefix=()) -> PropagationOutcome:
    vs = g.vertices
    applied = list(prefix) + [OrientationAssignment(vs[i], vs[j], Mark(k)) for i, j, k in log]
    if ok:
        return PropagationOutcome(g, applied)
    return PropagationOutcome(None, applied, applied[-1])


def meek_closure(p: MixedGraph, order: Sequence[int] | None = None) -> PropagationOutcome:
    """Apply Meek R1-R4 until nothing changes.

    ``order`` permutes the vertex scan order; the fixpoint does not depend on
    it for consistent inputs.
    """
    if p.kind != GraphClass.PDAG:
        raise GraphClassError("meek_closure needs a PDAG")
    g = p.copy()
    ok, log = _run(g._m, _meek_step, order)
    return _outcome(g, ok, log)


def fci_closure(p: MixedGraph, order: Sequence[int] | None = None) -> PropagationOutcome:
    """Apply FCI R1-R3 until nothing changes.  Not complete for PAGs."""
    if p.kind != GraphClass.PAG:
        raise GraphClassError("fci_closure needs a PAG")
    g = p.copy()
    ok, log = _run(g._m, _fci_step, order)
    return _outcome(g, ok, log)


def closure(p: MixedGraph) -> PropagationOutcome:
    if p.kind == GraphClass.PDAG:
        return meek_closure(p)
    if p.kind == GraphClass.PAG:
        return fci_closure(p)
    return PropagationOutcome(p.copy(), [])


def _apply_raw(m, kind: GraphClass, i: int, j: int, mark: int) -> tuple:
    """In-place ApplyOrientation on a matrix; returns (ok, log)."""
    s = _Marks(m)
    try:
        s.set(i, j, mark)
        if mark == TAIL and m[j][i] == TAIL:
            # tail-tail edges are excluded
            raise _Conflict
        if kind == GraphClass.PDAG:
            s.set(j, i, TAIL if mark == ARROW else ARROW)
            step = _meek_step
        else:
            step = _fci_step
        order = range(s.n)
        while step(s, order):
            pass
    except _Conflict:
        return False, s.log
    return True, s.log


def apply_orientation(p: MixedGraph, x: str, y: str, mark: Mark) -> PropagationOutcome:
    """Put ``mark`` at ``y`` on the edge ``x *-o y`` and propagate.

    In a PDAG the opposite end is set too (``x -> y`` or ``x <- y``), since
    PDAG edges are either directed or undirected.
    """
    mark = Mark(mark)
    if mark == Mark.CIRCLE:
        raise InputError("can only apply a tail or an arrowhead")
    if p.kind not in (GraphClass.PDAG, GraphClass.PAG):
        raise GraphClassError("apply_orientation needs a PDAG or a PAG")
    i, j = p.index(x), p.index(y)
    if p._m[i][j] != CIRCLE:
        raise InputError(f"mark at {y} on {x} - {y} is not a circle")
    g = p.copy()
    ok, log = _apply_raw(g._m, p.kind, i, j, int(mark))
    return _outcome(g, ok, log)
