"""Interpolating targets by terms over a generator and automorphism moves."""

from __future__ import annotations

from rado.closure import (
    InterpolationGoal,
    collapsing_generator,
    delete_all_edges,
    edge_deleting_generator,
    interpolate_search,
)
from rado.core import induced_subgraph
from rado.operations import make_constant, make_eN

region = range(8)

e = collapsing_generator(region)
d = interpolate_search([e], InterpolationGoal(make_constant(range(4), 0)))
print("constant on 0..3:", d, f"(depth {d.depth}, {d.states_explored} states)")
for i, m in enumerate(d.to_json()["moves"]):
    print(f"  aut {i}: {m}")

g = edge_deleting_generator(region)
total, history = delete_all_edges(g, induced_subgraph([0, 1, 3]))
print("\nedge counts while deleting from a triangle:", [len(h.edges()) for h in history])
print("composed map:", {x: y for (x,), y in total.entries.items()})

d = interpolate_search([g], InterpolationGoal(make_eN([0, 1, 3])))
print("search for the same target:", d)
