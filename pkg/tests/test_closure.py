from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from rado.behavior import MINIMAL_REPRESENTATIVES
from rado.closure import (
    Derivation,
    InterpolationGoal,
    SearchInconclusive,
    StructurallyImpossible,
    automorphism_move,
    check_derivation,
    collapsing_generator,
    delete_all_edges,
    delete_one_edge,
    edge_deleting_generator,
    format_term,
    interpolate_search,
    parse_term,
    term_moves,
    type_stability_check,
)
from rado.core import PartialIso, RadoError, bit_adjacent, induced_subgraph
from rado.operations import FunctionSample, make_constant, make_eN, make_identity

REGION = range(8)


def test_automorphism_move_examples():
    assert automorphism_move([0, 1], [1, 3]).pairs == {0: 1, 1: 3}
    assert automorphism_move([0, 1], [0, 2]) is None
    assert automorphism_move([0, 1, 2, 5], [0, 1, 2, 5]).pairs == {0: 0, 1: 1, 2: 2, 5: 5}


def test_automorphism_move_covering_target():
    p = automorphism_move([0, 1, 2], [1, 3])
    assert {1, 3} <= p.image and len(p) == 3


def test_identity_generator_gives_depth_one():
    gen = make_identity(REGION)
    target = FunctionSample(1, {(0,): 1, (1,): 3})
    d = interpolate_search([gen], InterpolationGoal(target))
    assert d.depth == 1 and str(d) == "(g0 (aut 0 x))"
    assert check_derivation(d, [gen], target)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=3, unique=True), st.lists(st.integers(0, 20), min_size=3, max_size=3))
def test_identity_reaches_exactly_the_partial_isomorphisms(dom, vals):
    target = FunctionSample(1, {(x,): v for x, v in zip(dom, vals)})
    try:
        PartialIso({x: target(x) for x in dom})
        is_iso = True
    except RadoError:
        is_iso = False
    gen = make_identity(REGION)
    try:
        d = interpolate_search([gen], InterpolationGoal(target, depth_cap=3))
    except StructurallyImpossible:
        d = None
        assert not is_iso
    assert (d is not None) == is_iso
    if d is not None:
        assert check_derivation(d, [gen], target)


def test_collapse_loop_reaches_constant():
    e = collapsing_generator(REGION)
    assert not e.injective
    # e collapses the edge {0,1} and sends the non-edge {1,5} to the edge {0,5}
    assert bit_adjacent(0, 1) and e(0) == e(1)
    assert not bit_adjacent(1, 5) and bit_adjacent(e(1), e(5))
    target = make_constant(range(4), 0)
    d = interpolate_search([e], InterpolationGoal(target, depth_cap=6))
    assert d is not None and d.depth <= 6
    assert check_derivation(d, [e], target)


def test_repeated_edge_deletion_found_by_search():
    e = edge_deleting_generator(REGION)
    assert e.injective
    triangle = [0, 1, 3]
    target = make_eN(triangle)
    d = interpolate_search([e], InterpolationGoal(target, depth_cap=4))
    assert d.depth == 3
    assert check_derivation(d, [e], target)


def test_depth_cap_is_inconclusive():
    e = collapsing_generator(REGION)
    with pytest.raises(SearchInconclusive):
        interpolate_search([e], InterpolationGoal(make_constant(range(4), 0), depth_cap=1))


def test_injective_generators_cannot_collapse():
    with pytest.raises(StructurallyImpossible):
        interpolate_search([edge_deleting_generator(REGION)], InterpolationGoal(make_constant(range(3), 0)))


def test_derivation_json_round_trip():
    e = collapsing_generator(REGION)
    target = make_constant(range(3), 0)
    d = interpolate_search([e], InterpolationGoal(target))
    data = json.loads(json.dumps(d.to_json()))
    back = Derivation.from_json(data)
    assert format_term(back.term) == data["term"]
    assert check_derivation(back, [e], target)
    assert len(term_moves(back.term)) == len(data["moves"])
    with pytest.raises(RadoError):
        parse_term("(aut 3 x)", [])


def test_monotone_moves():
    e = collapsing_generator(REGION)
    d = interpolate_search([e], InterpolationGoal(make_constant(range(3), 0)), move_kind="monotone")
    for m in term_moves(d.term):
        items = sorted(m.pairs.items())
        assert [w for _, w in items] == sorted(w for _, w in items)


def test_delete_one_edge_on_triangle():
    e = edge_deleting_generator(REGION)
    tri = induced_subgraph([0, 1, 3])
    step = delete_one_edge(e, tri, (0, 1))
    g = induced_subgraph(step.image())
    assert len(g.edges()) == 2
    assert not bit_adjacent(step(0), step(1))
    assert bit_adjacent(step(0), step(3)) and bit_adjacent(step(1), step(3))


def test_three_deletions_empty_a_triangle():
    e = edge_deleting_generator(REGION)
    total, history = delete_all_edges(e, induced_subgraph([0, 1, 3]))
    assert [len(h.edges()) for h in history] == [3, 2, 1, 0]
    assert total.injective


def test_delete_edge_errors():
    e = edge_deleting_generator(REGION)
    with pytest.raises(RadoError):
        delete_one_edge(e, induced_subgraph([0, 2, 8]), (0, 2))
    with pytest.raises(RadoError):
        delete_one_edge(e, induced_subgraph([0, 1, 2]), (0, 2))
    # the collapsing generator does not delete edges
    with pytest.raises(RadoError):
        delete_one_edge(collapsing_generator(REGION), induced_subgraph([0, 1, 3]), (0, 1))


@pytest.mark.parametrize("k", sorted(MINIMAL_REPRESENTATIVES))
def test_type_stability(k):
    report = type_stability_check(MINIMAL_REPRESENTATIVES[k], depth=1)
    assert report.checked > 0
    assert report.ok, (report.mismatches, report.outside)
