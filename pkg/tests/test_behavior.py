from __future__ import annotations

import random
from itertools import combinations

import pytest

from rado.behavior import (
    MINIMAL_REPRESENTATIVES,
    NOT_MINIMAL,
    TermError,
    UnderWitnessedError,
    classify_binary,
    classify_unary,
    closure_stays_in_class,
    compose_types,
    is_canonical_partitioned,
    minimality_class,
    parse_term,
    realize_term,
    reachable_types,
    term_symbols,
)
from rado.btypes import NONCANON, BinaryType
from rado.core import RadoError, bit_adjacent, induced_subgraph
from rado.operations import (
    FunctionSample,
    make_binary_injection,
    make_constant,
    make_eE,
    make_eN,
    make_identity,
    make_minus,
    make_switch,
)

GRID = range(6)


def six_sets(seed=0, count=150):
    """Seeded 6-subsets of {0..30} holding at least one edge and one non-edge."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        S = sorted(rng.sample(range(31), 6))
        rels = {bit_adjacent(a, b) for a, b in combinations(S, 2)}
        if rels == {True, False}:
            out.append(S)
    return out


def test_classify_unary_examples():
    S = [0, 1, 2, 3, 5, 8]
    g = induced_subgraph(S)
    assert classify_unary(make_minus(S), g).kind == "minus"
    assert classify_unary(make_identity(range(6)), induced_subgraph(range(6))).kind == "identity"
    assert classify_unary(make_constant(S, 0), g).kind == "constant"


@pytest.mark.parametrize("make, kind", [(make_eE, "eE"), (make_eN, "eN"), (make_minus, "minus")])
def test_classify_unary_on_six_sets(make, kind):
    for S in six_sets():
        assert classify_unary(make(S), induced_subgraph(S)).kind == kind


def test_constant_classifies_on_every_six_set_kind():
    for S in six_sets(1, 50) + [[0, 2, 8, 10, 32, 34]]:
        assert classify_unary(make_constant(S, 0), induced_subgraph(S)).kind == "constant"


def test_edgeless_sets_are_under_witnessed():
    S = [0, 2, 8, 10, 32, 34]
    assert induced_subgraph(S).edges() == []
    with pytest.raises(UnderWitnessedError):
        classify_unary(make_eE(S), induced_subgraph(S))


def test_non_canonical_unary():
    S = [0, 1, 2, 3]
    # collapse the edge 0-1 only; edge 1-3 keeps its color
    f = FunctionSample(1, {(0,): 0, (1,): 0, (2,): 2, (3,): 3})
    assert classify_unary(f, induced_subgraph(S)).kind == NONCANON


def test_switch_is_canonical_for_its_partition():
    S = list(range(10))
    f = make_switch({0}, S)
    res = is_canonical_partitioned(f, induced_subgraph(S), [[0], S[1:]])
    assert res.canonical
    assert res.table["1"]["behavior"] == "id"
    assert res.table["0-1"]["behavior"] == "minus"


def test_single_part_matches_classify_unary():
    S = [0, 1, 2, 3, 5, 8]
    g = induced_subgraph(S)
    f = make_minus(S)
    assert is_canonical_partitioned(f, g, [S]).table["0"]["behavior"] == "minus"


def test_partition_collapse_one_edge_not_canonical():
    S = [0, 1, 2, 3]
    f = FunctionSample(1, {(0,): 0, (1,): 0, (2,): 2, (3,): 3})
    assert not is_canonical_partitioned(f, induced_subgraph(S), [S]).canonical
    with pytest.raises(RadoError):
        is_canonical_partitioned(f, induced_subgraph(S), [[0, 1]])


def test_classify_binary_examples():
    t = classify_binary(make_binary_injection(BinaryType("max", "max", "E", "E"), GRID, GRID))
    assert (t.straight, t.twisted, t.neq_eq, t.eq_neq, t.order) == ("max", "max", "E", "E", "p1")
    bal = BinaryType("p1", "p1", "id", "id")
    assert classify_binary(make_binary_injection(bal, GRID, GRID)) == bal


def test_classify_binary_rejects_projection_sample():
    proj = FunctionSample(2, {(a, b): a for a in range(4) for b in range(4)})
    with pytest.raises(RadoError):
        classify_binary(proj)


def test_classify_binary_small_grid_under_witnessed():
    f = make_binary_injection(BinaryType("p1", "p1", "id", "id"), range(2), range(2))
    with pytest.raises(UnderWitnessedError):
        classify_binary(f)


@pytest.mark.parametrize(
    "spec",
    list(MINIMAL_REPRESENTATIVES.values()) + [t.dual() for t in MINIMAL_REPRESENTATIVES.values()],
    ids=lambda t: t.short(),
)
def test_round_trip(spec):
    assert classify_binary(make_binary_injection(spec, GRID, GRID)) == spec


F_E_ID_P2 = BinaryType("p2", "p2", "E", "id", "p1")

IDENTITIES = [
    ("(f v u)", ("p1", "id", "E")),
    ("(f u (f u v))", ("p2", "E", "id")),
    ("(f v (f u v))", ("p2", "E", "id")),
    ("(f (f u v) v)", ("p2", "E", "id")),
    ("(f (f u v) u)", ("p1", "id", "E")),
    ("(f (f u v) (f v u))", ("p1", "id", "E")),
]


@pytest.mark.parametrize("term, want", IDENTITIES)
def test_identities_for_E_id_projection(term, want):
    env = {"f": F_E_ID_P2}
    pred = compose_types(term, env)
    assert (pred.straight, pred.neq_eq, pred.eq_neq) == want
    assert pred.straight == pred.twisted
    assert classify_binary(realize_term(term, env, GRID, GRID)) == pred


@pytest.mark.parametrize("twisted", ["p1", "p2"])
def test_max_projection_yields_max_max(twisted):
    env = {"f": BinaryType("max", twisted, "id", "id")}
    term = "(f (f u v) (f u (alpha v)))"
    pred = compose_types(term, env)
    assert (pred.straight, pred.twisted) == ("max", "max")
    assert classify_binary(realize_term(term, env, GRID, GRID)) == pred


@pytest.mark.parametrize("spec", ["max,min,id,id", "p1,p2,id,id"])
def test_mixed_types_yield_p2_p2(spec):
    env = {"f": BinaryType.parse(spec)}
    term = "(f (f u v) (alpha v))"
    pred = compose_types(term, env)
    assert (pred.straight, pred.twisted) == ("p2", "p2")
    assert classify_binary(realize_term(term, env, GRID, GRID)) == pred


def test_terms_parse_and_print():
    t = parse_term("(f (f u v) (alpha v))")
    assert str(t) == "(f (f u v) (alpha v))"
    assert term_symbols(t) == {"f"}
    with pytest.raises(RadoError):
        parse_term("(f u")


def test_non_injective_term_rejected():
    with pytest.raises(TermError):
        compose_types("(f u u)", {"f": MINIMAL_REPRESENTATIVES[1]})
    with pytest.raises(TermError):
        compose_types("(g u v)", {"f": MINIMAL_REPRESENTATIVES[1]})


def test_minimality_examples():
    assert minimality_class(BinaryType("p1", "p1", "id", "id")) == 1
    assert minimality_class(BinaryType("max", "min", "id", "id")) == NOT_MINIMAL
    assert minimality_class(BinaryType("p1", "p2", "E", "E")) == NOT_MINIMAL
    for k, t in MINIMAL_REPRESENTATIVES.items():
        assert minimality_class(t) == k
        assert minimality_class(t.swap_args()) == k


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 8, 9])
def test_closure_stays_in_class(k):
    for t in (MINIMAL_REPRESENTATIVES[k], MINIMAL_REPRESENTATIVES[k].dual()):
        ok, bad = closure_stays_in_class(t, rounds=4)
        assert ok, [b.short() for b in bad]


@pytest.mark.parametrize("k, lands_in", [(6, 8), (7, 9)])
def test_projection_dominated_classes_escape(k, lands_in):
    # recorded finding: f(u, f(u, v)) leaves the class in this algebra
    t = MINIMAL_REPRESENTATIVES[k]
    ok, bad = closure_stays_in_class(t, rounds=4)
    assert not ok
    escaped = compose_types("(f u (f u v))", {"f": t})
    assert minimality_class(escaped) == lands_in
    assert classify_binary(realize_term("(f u (f u v))", {"f": t}, range(7), range(7))) == escaped


def test_reachable_types_include_start():
    t = MINIMAL_REPRESENTATIVES[2]
    assert t in set(reachable_types(t, rounds=2).values())
