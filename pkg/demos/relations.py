"""Parity relations, the existential definition of disequality, and an injective square map."""

from __future__ import annotations

import time

from rado.galois import EDGE, NEQ, NEQ_PP, NON_EDGE, ParityRelation, all_tuples, injective_square_hom, preserves
from rado.operations import make_minus, make_switch

dom = range(10)
for name, f in (("minus", make_minus(dom)), ("sw", make_switch({0}, dom))):
    for k in (3, 4, 5):
        res = preserves(f, ParityRelation(k), all_tuples(dom, k))
        note = "" if res.preserved else f"  e.g. {res.selection[0]} -> {res.image}"
        print(f"{name:5s} R{k}: {res.preserved}{note}")

res = NEQ_PP.evaluate((9, 0))
print("\nexists z. E(9,z) and N(0,z):", res.value, "witness", res.witness, "via", res.method)

t0 = time.perf_counter()
hom = injective_square_hom(range(4), [EDGE, NON_EDGE, NEQ], 500)
print(f"\nsquare map for n=4 ({time.perf_counter() - t0:.1f}s, {hom.nodes} nodes):")
for p, v in sorted(hom.mapping.items()):
    print(f"  {p} -> {v}")
