"""Text formats: graph files, knowledge files and DOT export.

Graph file::

    graph pag 3
    X Y Z
    X >o Y
    Y oo Z
    knowledge:
    X !=> Z

The header names the class and vertex count, the second line lists the
vertices, and each edge line gives the mark at the left vertex, then the
mark at the right one (``-`` tail, ``>`` arrowhead, ``o`` circle).  Text
after ``#`` is ignored.  Knowledge lines are ``X => Y`` or ``X !=> Y``,
optionally followed by ``p=<p-value>`` or by ``u=<utility> c=<cost>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bnb import WeightedConstraint, weights_from_pvalue
from .exceptions import InputError
from .graph import GraphClass, Mark, MixedGraph
from .incorporate import KnowledgeConstraint, PCGraph, Sign

__all__ = [
    "GraphFile",
    "parse_graph",
    "serialize_graph",
    "parse_knowledge",
    "serialize_knowledge",
    "parse_weighted_constraint",
    "to_dot",
]

_KNOWLEDGE_HEADER = "knowledge:"


@dataclass
class GraphFile:
    graph: MixedGraph
    knowledge: list = field(default_factory=list)

    @property
    def constraints(self) -> list:
        return [w.constraint for w in self.knowledge]


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_number(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise InputError(f"line {lineno}: not a number: {token!r}") from None


def parse_weighted_constraint(line: str, lineno: int = 0) -> WeightedConstraint:
    """``X => Y``, ``X !=> Y p=0.01`` or ``X => Y u=1 c=0``."""
    parts = line.split()
    if len(parts) < 3 or parts[1] not in ("=>", "!=>"):
        raise InputError(f"line {lineno}: expected 'X => Y' or 'X !=> Y', got {line!r}")
    try:
        kc = KnowledgeConstraint(parts[0], parts[2], Sign(parts[1]))
    except InputError as exc:
        raise InputError(f"line {lineno}: {exc}") from None
    opts = {}
    for tok in parts[3:]:
        key, eq, val = tok.partition("=")
        if not eq or key not in ("p", "u", "c") or key in opts:
            raise InputError(f"line {lineno}: unexpected token {tok!r}")
        opts[key] = _parse_number(val, lineno)
    if "p" in opts:
        if "u" in opts or "c" in opts:
            raise InputError(f"line {lineno}: give either p= or u= and c=, not both")
        try:
            u, c = weights_from_pvalue(opts["p"], kc.sign)
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    else:
        u, c = opts.get("u", 1.0), opts.get("c", 0.0)
    try:
        return WeightedConstraint(kc, u, c)
    except InputError as exc:
        raise InputError(f"line {lineno}: {exc}") from None


def parse_knowledge(text: str) -> list:
    """One WeightedConstraint per non-empty line (unweighted: ``u=1, c=0``)."""
    return [parse_weighted_constraint(line, lineno) for lineno, line in _content_lines(text)]


def _fmt_weight(w: WeightedConstraint) -> str:
    if w.u == 1.0 and w.c == 0.0:
        return str(w.constraint)
    return f"{w.constraint} u={w.u!r} c={w.c!r}"


def serialize_knowledge(k) -> str:
    lines = []
    for w in k:
        lines.append(_fmt_weight(w) if isinstance(w, WeightedConstraint) else str(w))
    return "".join(line + "\n" for line in lines)


def parse_graph(text: str, *, validate: bool = True) -> GraphFile:
    """Parse a graph file; ``validate=False`` skips the class checks."""
    lines = list(_content_lines(text))
    if not lines:
        raise InputError("line 1: empty graph file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "graph":
        raise InputError(f"line {lineno}: expected 'graph <class> <n>'")
    try:
        kind = GraphClass(parts[1].lower())
    except ValueError:
        raise InputError(f"line {lineno}: unknown graph class {parts[1]!r}") from None
    try:
        n = int(parts[2])
    except ValueError:
        raise InputError(f"line {lineno}: vertex count {parts[2]!r} is not an integer") from None
    if n == 0:
        vertices, rest = [], lines[1:]
    else:
        if len(lines) < 2:
            raise InputError(f"line {lineno}: missing vertex line")
        vlineno, vline = lines[1]
        vertices = vline.split()
        if len(vertices) != n:
            raise InputError(f"line {vlineno}: header says {n} vertices, found {len(vertices)}")
        rest = lines[2:]
    edges = []
    knowledge = []
    in_knowledge = False
    for lineno, line in rest:
        if line == _KNOWLEDGE_HEADER:
            if in_knowledge:
                raise InputError(f"line {lineno}: repeated knowledge section")
            in_knowledge = True
            continue
        if in_knowledge:
            knowledge.append(parse_weighted_constraint(line, lineno))
            continue
        toks = line.split()
        if len(toks) != 3 or len(toks[1]) != 2 or any(ch not in "->o" for ch in toks[1]):
            raise InputError(f"line {lineno}: expected 'A <mark><mark> B', got {line!r}")
        edges.append((lineno, toks[0], toks[2], Mark.from_symbol(toks[1][0]), Mark.from_symbol(toks[1][1])))
    try:
        g = MixedGraph(vertices, (), kind, validate=False)
    except InputError as exc:
        raise InputError(f"line 2: {exc}") from None
    for lineno, u, v, mu, mv in edges:
        try:
            i, j = g.index(u), g.index(v)
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if i == j:
            raise InputError(f"line {lineno}: self-loop on {u}")
        if g._m[i][j]:
            msg = f"line {lineno}: more than one edge between {u} and {v}"
            at_u, at_v = g._m[j][i], g._m[i][j]
            if {at_u, at_v} == {Mark.TAIL, Mark.ARROW} and (mu, mv) == (at_v, at_u):
                msg += " (opposite directions form a directed cycle)"
            raise InputError(msg)
        g._m[i][j], g._m[j][i] = int(mv), int(mu)
    for w in knowledge:
        for v in (w.constraint.x, w.constraint.y):
            if v not in g._index:
                raise InputError(f"knowledge refers to unknown vertex {v!r}")
    if validate:
        g.validate()
    return GraphFile(g, knowledge)


def serialize_graph(g, knowledge=None) -> str:
    """Text form of a MixedGraph or PCGraph; edges in vertex order."""
    if isinstance(g, PCGraph):
        if knowledge is None:
            knowledge = g.dashed
        g = g.solid
    elif isinstance(g, GraphFile):
        if knowledge is None:
            knowledge = g.knowledge
        g = g.graph
    out = [f"graph {g.kind.value} {g.n}", " ".join(g.vertices)]
    for e in g.edges():
        out.append(str(e))
    if knowledge:
        out.append(_KNOWLEDGE_HEADER)
        out.append(serialize_knowledge(knowledge).rstrip("\n"))
    return "\n".join(out) + "\n"


_DOT_ARROW = {Mark.TAIL: "none", Mark.ARROW: "normal", Mark.CIRCLE: "odot"}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g, knowledge=None) -> str:
    """Graphviz digraph: circles drawn as ``odot``, knowledge edges dashed."""
    if isinstance(g, PCGraph):
        if knowledge is None:
            knowledge = g.dashed
        g = g.solid
    lines = ["digraph {"]
    for v in g.vertices:
        lines.append(f"  {_quote(v)};")
    for e in g.edges():
        lines.append(f"  {_quote(e.u)} -> {_quote(e.v)} "
                     f"[dir=both, arrowtail={_DOT_ARROW[e.mark_u]}, arrowhead={_DOT_ARROW[e.mark_v]}];")
    for c in knowledge or ():
        c = c.constraint if isinstance(c, WeightedConstraint) else c
        label = "" if c.positive else ', label="not", color=red'
        lines.append(f"  {_quote(c.x)} -> {_quote(c.y)} [style=dashed{label}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
