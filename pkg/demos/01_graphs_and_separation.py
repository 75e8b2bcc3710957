"""
Mixed graphs, ancestry and m-separation
=======================================

A graph is a set of vertices plus edges with a mark at each end: a tail
(``-``), an arrowhead (``>``) or a circle (``o``) for "not known".  Edges
are written with the mark at the left vertex first, so ``A -> B`` is a
directed edge and ``A >> B`` a bidirected one.
"""

from causalpaths import (
    GraphClass,
    MixedGraph,
    ancestors,
    has_possibly_directed_path,
    is_m_separated,
    markov_equivalent,
)

# A small maximal ancestral graph: L is unmeasured, so its effect on Y and W
# shows up as Y <-> W.
g = MixedGraph("XYWZ", ["X -> Y", "Y >> W", "W -> Z"], GraphClass.MAG)
print(g)
print("ancestors of Z:", sorted(ancestors(g, "Z")))

# m-separation: Y is a collider between X and W, so X and W start out
# separated and become connected once Y is conditioned on.
print("X _||_ W        :", is_m_separated(g, "X", "W"))
print("X _||_ W | {Y}  :", is_m_separated(g, "X", "W", {"Y"}))

# Two graphs with the same skeleton, colliders and separations are Markov
# equivalent; reversing the first edge of a chain keeps the class.
chain = MixedGraph("XYZ", ["X -> Y", "Y -> Z"], GraphClass.MAG)
flipped = MixedGraph("XYZ", ["X >- Y", "Y -> Z"], GraphClass.MAG)
collider = MixedGraph("XYZ", ["X -> Y", "Z -> Y"], GraphClass.MAG)
print("chain ~ flipped :", markov_equivalent(chain, flipped))
print("chain ~ collider:", markov_equivalent(chain, collider))

# Circles leave room for directed paths that may or may not exist.
pag = MixedGraph("XYZ", ["X oo Y", "Y oo Z"], GraphClass.PAG)
print("possibly X ~> Z :", has_possibly_directed_path(pag, "X", "Z"))
