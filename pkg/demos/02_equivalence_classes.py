"""
From a causal DAG to its equivalence class
==========================================

Data alone identify a DAG only up to its Markov equivalence class.  The
class of a DAG is drawn as a CPDAG; with hidden variables the observed part
is a MAG, whose class is drawn as a PAG.
"""

from causalpaths import GraphClass, MixedGraph, dag_to_cpdag, latent_project, mag_to_pag, pag_to_mag

dag = MixedGraph("ABCDEL", ["A -> B", "C -> B", "B -> E", "L -> C", "L -> D"], GraphClass.DAG)

# The collider A -> B <- C is identified and B -> E follows from it.
print(dag_to_cpdag(dag))

# Hiding L turns its two effects into a bidirected edge C <-> D.
mag = latent_project(dag, {"L"})
print(mag)

# The PAG keeps only the marks shared by every MAG in the class.  From the
# observed data C <-> D cannot be told apart from C -> D or C <- D.
pag = mag_to_pag(mag)
print(pag)
print("circles left:", pag.num_circles())

# Any member of the class can be read back off the PAG.
print(pag_to_mag(pag))
