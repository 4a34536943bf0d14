"""Graph substrate walk-through: bit-row graphs, pair views, densities.

Everything downstream (discrepancy certificates, C4 censuses, embedding
counts) is built on AND + popcount over per-vertex bit rows, so this demo
starts with the raw material: loading a graph from the edge-list text
format, taking a bipartite view, and reading off densities and codegrees.
"""

from fractions import Fraction

from bijumble.graphs import (
    codegree,
    complete_bipartite,
    density,
    format_edge_list,
    p_density,
    parse_edge_list,
    perfect_matching,
)

# The text format: a header line `n=<vertex_count>`, one `u v` edge per
# line, `#` comments ignored.  Parsing symmetrises and collapses duplicates.
text = """\
# a 3-vertex path
n=3
0 1
1 2
"""
path = parse_edge_list(text)
print("parsed path:", path.vertex_count, "vertices,", path.edge_count(), "edges")
print("round-trips to:")
print(format_edge_list(path))

# A pair view is a graph plus two disjoint vertex sets.  Density is exact
# (a Fraction); the p-density e/(p|U||W|) rescales it for sparse hosts.
pair = perfect_matching(3)
print("matching density:", density(pair), "=", float(density(pair)))
print("matching p-density at p=1/3:", p_density(pair, Fraction(1, 3)))

kb = complete_bipartite(3, 4)
print("complete 3x4 density:", density(kb))
print("complete 3x4 p-density at p=0.5:", p_density(kb, 0.5))

# Codegree: common neighbours of a left pair inside a target set.  For the
# complete pair every left pair sees the whole right side.
print("codegree of the two left vertices of K_{2,5}:",
      codegree(0, 1, complete_bipartite(2, 5).right, complete_bipartite(2, 5).graph))
