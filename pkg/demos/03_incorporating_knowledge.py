"""
Adding causal knowledge to a PAG
================================

A path constraint says that X is (``X => Y``) or is not (``X !=> Y``) a
possibly indirect cause of Y.  Incorporating constraints keeps the class
members that satisfy them and orients every mark they all agree on.
"""

from causalpaths import (
    GraphClass,
    MixedGraph,
    SearchOptions,
    SearchStats,
    causes,
    find_pc_graph,
    mag_to_pag,
    not_causes,
    serialize_graph,
)

chain = MixedGraph("XYZ", ["X oo Y", "Y oo Z"], GraphClass.PAG)

# Knowing that X causes Z leaves a single member: X -> Y -> Z.
sat, pc = find_pc_graph(chain, [causes("X", "Z")])
print(serialize_graph(pc))

# Knowing that it does not orients X <-o Y only.  The constraint itself is
# kept as a dashed knowledge edge, since the solid graph cannot show it.
sat, pc = find_pc_graph(chain, [not_causes("X", "Z")])
print(serialize_graph(pc))

# Contradictory knowledge is reported, not guessed around.
print("both:", find_pc_graph(chain, [causes("X", "Z"), not_causes("X", "Z")]))

# A larger class: the triangle X, V, W plus V -> Y <- W, all edges open.
ref = MixedGraph("XVWY", ["X -> V", "X -> W", "V -> W", "V -> Y", "W -> Y"], GraphClass.MAG)
pag = mag_to_pag(ref)
for pruning in (False, True):
    stats = SearchStats()
    sat, pc = find_pc_graph(pag, [causes("X", "Y")], SearchOptions(pruning=pruning), reference=ref, stats=stats)
    print(f"pruning={pruning}: {stats.nodes_visited} search nodes, {stats.leaves_found} members reached")
print(serialize_graph(pc))
