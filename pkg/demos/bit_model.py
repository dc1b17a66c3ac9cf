"""Witnesses, induced subgraphs and back-and-forth in the BIT model."""

from __future__ import annotations

from rado.core import PartialIso, extend_iso, find_witness, greedy_clique, induced_subgraph

# least vertex adjacent to 0 and 1 but not to 2
print("witness({0,1}, {2}) =", find_witness({0, 1}, {2}))

g = induced_subgraph(range(6))
print("edges on 0..5:", g.edges())

# greedy cliques grow as a tower; the sixth element still fits in an int
clique = greedy_clique(6)
print("least clique:", clique[:5], "then a", clique[5].bit_length(), "bit number")

# a partial isomorphism between two edges, grown by two forth steps and one back step
p = PartialIso({0: 1, 1: 3})
p = extend_iso(p, 2)
p = extend_iso(p, 4)
p = extend_iso(p.inverse(), 5).inverse()
print("after back-and-forth:", dict(sorted(p.pairs.items())))
