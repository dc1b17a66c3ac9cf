"""Arrow checks for small ordered graphs and canonical copies of a unary sample."""

from __future__ import annotations

from rado.operations import make_minus, make_switch
from rado.ramsey import arrow_check, arrow_search, complete, cycle, empty, find_canonical_copy, find_mono_copy, graph_string

K2, K3 = complete(2), complete(3)
for n in (5, 6):
    res = arrow_check(complete(n), K3, K2, 2)
    print(f"K{n} -> (K3)^K2_2: {res.arrow}  ({res.explored} nodes)")
    if res.witness:
        red = [res.p_copies[i] for i, c in enumerate(res.witness) if c == 0]
        print("  red edges of the witness:", red)

S = arrow_search(K2, empty(1), 3, 5)
print("least S with S -> (K2)^1_3:", graph_string(S))

region = range(21)
print("minus, first canonical C4:", find_mono_copy(make_minus(region), cycle(4), region))
print("switch at 0, C4 with 0 fixed:", find_canonical_copy(make_switch({0}, region), cycle(4), region, {0: 0}))
