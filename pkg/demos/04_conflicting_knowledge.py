"""
Choosing among conflicting knowledge
====================================

When the constraints contradict the graph or each other, branch and bound
finds the subset with the best score.  Each constraint earns ``u`` when a
class member satisfies it and ``c`` when it does not.
"""

from causalpaths import (
    GraphClass,
    MixedGraph,
    WeightedConstraint,
    causes,
    find_pc_graph,
    not_causes,
    search_bnb,
    weights_from_pvalue,
)

chain = MixedGraph("XYZ", ["X oo Y", "Y oo Z"], GraphClass.PAG)

# With u=1 and c=0 the score counts satisfied constraints.
k = [causes("X", "Z"), not_causes("X", "Z"), causes("Y", "Z")]
res = search_bnb(chain, k)
print("largest consistent subset:", [str(c) for c in res.selected(k)], "score", res.best_score)

# Weights from test p-values: a dependence found at p = 0.001 is trusted far
# more than an independence accepted at p = 0.6.
weighted = [
    WeightedConstraint(causes("X", "Z"), *weights_from_pvalue(0.001, "=>")),
    WeightedConstraint(not_causes("X", "Z"), *weights_from_pvalue(0.6, "!=>")),
]
res = search_bnb(chain, weighted)
chosen = res.selected(weighted)
print("kept:", [str(c) for c in chosen], "score", round(res.best_score, 3))

# The chosen subset is then incorporated as usual.
print(find_pc_graph(chain, chosen)[1].solid)
