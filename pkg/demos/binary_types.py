"""Build binary injections of each minimal type, classify them, and run the type algebra."""

from __future__ import annotations

from rado.behavior import (
    CLASS_NAMES,
    MINIMAL_REPRESENTATIVES,
    classify_binary,
    closure_stays_in_class,
    compose_types,
    realize_term,
)
from rado.btypes import BinaryType
from rado.operations import dual, make_binary_injection

grid = range(6)
for k, spec in MINIMAL_REPRESENTATIVES.items():
    f = make_binary_injection(spec, grid, grid)
    got = classify_binary(f)
    print(f"class {k} ({CLASS_NAMES[k]}): built {spec.short():18s} classified {got.short():18s} dual {classify_binary(dual(f)).short()}")

# a mixed type is not minimal: one composition already lands in a projection type
f = BinaryType.parse("max,min,id,id")
term = "(f (f u v) (alpha v))"
pred = compose_types(term, {"f": f})
real = classify_binary(realize_term(term, {"f": f}, grid, grid))
print(f"\n{term} over {f.short()}: predicted {pred.short()}, realized {real.short()}")

# closure check per class; classes 6 and 7 leave their class through (f u (f u v))
for k, spec in MINIMAL_REPRESENTATIVES.items():
    ok, bad = closure_stays_in_class(spec, rounds=3)
    print(f"class {k}: closed={ok}" + ("" if ok else f", e.g. reaches {bad[0].short()}"))
