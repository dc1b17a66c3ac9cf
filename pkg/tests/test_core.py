from __future__ import annotations

import json
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rado.core import (
    FiniteGraph,
    PartialIso,
    RadoError,
    bit_adjacent,
    extend_iso,
    find_copy,
    find_witness,
    greedy_clique,
    greedy_independent,
    induced_subgraph,
)
from rado.naturals import BigNat


def brute_witness(U, W, limit=1 << 12):
    for v in range(limit):
        if v in U or v in W:
            continue
        if all(bit_adjacent(u, v) for u in U) and not any(bit_adjacent(w, v) for w in W):
            if v > max(set(U) | set(W), default=-1):
                return v
    return None


def test_bit_adjacent_examples():
    assert bit_adjacent(0, 1)
    assert not bit_adjacent(0, 2)
    assert not bit_adjacent(5, 5)


def test_bit_adjacent_symmetric_irreflexive_exhaustive():
    n = 1001
    v = np.arange(n)
    lo, hi = np.minimum.outer(v, v), np.maximum.outer(v, v)
    adj = ((hi >> lo) & 1).astype(bool) & (lo != hi)
    assert (adj == adj.T).all()
    assert not adj.diagonal().any()
    for a, b in [(0, 1), (3, 11), (2, 999), (17, 1000)]:
        assert adj[a, b] == bit_adjacent(a, b) == bit_adjacent(b, a)


def test_find_witness_examples():
    assert find_witness({0, 1}, {2}) == 3
    assert find_witness(set(), set()) == 0
    assert find_witness({0, 1, 3}, set()) == 11


def test_find_witness_rejects_overlap():
    with pytest.raises(RadoError):
        find_witness({1, 2}, {2})


@given(st.lists(st.integers(0, 2), min_size=7, max_size=7))
def test_find_witness_matches_scan(assign):
    U = {i for i, a in enumerate(assign) if a == 1}
    W = {i for i, a in enumerate(assign) if a == 2}
    assert find_witness(U, W) == brute_witness(U, W)


def test_find_witness_extension_property_small():
    for assign in product(range(3), repeat=5):
        U = {i for i, a in enumerate(assign) if a == 1}
        W = {i for i, a in enumerate(assign) if a == 2}
        v = find_witness(U, W)
        assert v not in U | W
        assert all(bit_adjacent(u, v) for u in U)
        assert not any(bit_adjacent(w, v) for w in W)


def test_induced_subgraph_examples():
    g = induced_subgraph({0, 1, 2})
    assert g.edges() == [(0, 1), (1, 2)]
    assert not g.adjacent(0, 2)
    assert len(induced_subgraph(())) == 0
    single = induced_subgraph({7})
    assert single.vertices == (7,) and single.edges() == []


def test_finite_graph_validation():
    with pytest.raises(RadoError):
        FiniteGraph([0, 1], np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(RadoError):
        FiniteGraph([0, 1], np.array([[1, 0], [0, 0]], dtype=bool))
    with pytest.raises(RadoError):
        FiniteGraph([0, 0], np.zeros((2, 2), dtype=bool))


def test_graph_json_roundtrip_and_bit_check():
    g = induced_subgraph(range(6))
    data = json.loads(json.dumps(g.to_json()))
    assert FiniteGraph.from_json(data) == g
    assert g.is_bit_induced()
    fake = FiniteGraph.from_edges([0, 1], [])
    assert not fake.is_bit_induced()
    assert '"0" -- "1"' in g.to_dot()


def test_graph_json_with_huge_vertices():
    g = induced_subgraph(greedy_clique(7))
    assert isinstance(g.vertices[-1], BigNat)
    data = json.loads(json.dumps(g.to_json()))
    assert "naturals" in data
    assert FiniteGraph.from_json(data) == g
    assert len(g.edges()) == 21


def test_extend_iso_examples():
    assert extend_iso(PartialIso({}), 0).pairs == {0: 0}
    assert extend_iso(PartialIso({0: 0}), 1).pairs == {0: 0, 1: 1}
    assert extend_iso(PartialIso({0: 0}), 2).pairs == {0: 0, 2: 2}
    with pytest.raises(RadoError):
        extend_iso(PartialIso({0: 0}), 0)


def test_partial_iso_rejects_non_isomorphisms():
    with pytest.raises(RadoError):
        PartialIso({0: 0, 1: 2})
    with pytest.raises(RadoError):
        PartialIso({0: 5, 1: 5})


def test_partial_iso_algebra():
    p = PartialIso({0: 1, 1: 3})
    assert p.inverse().pairs == {1: 0, 3: 1}
    assert p.inverse().compose(p).pairs == {0: 0, 1: 1}
    assert PartialIso.from_json(json.loads(json.dumps(p.to_json()))) == p


@settings(max_examples=60)
@given(st.lists(st.integers(0, 40), min_size=1, max_size=5, unique=True), st.lists(st.integers(0, 60), max_size=4))
def test_back_and_forth_keeps_isomorphism(dom, extra):
    # start from the greedy copy of the induced graph on dom
    p = PartialIso({})
    for v in dom:
        p = extend_iso(p, v)
    for v in extra:
        if v not in p.domain:
            p = extend_iso(p, v)
        if v not in p.image:
            p = extend_iso(p.inverse(), v).inverse()
    for (a, fa), (b, fb) in combinations(p.pairs.items(), 2):
        assert bit_adjacent(a, b) == bit_adjacent(fa, fb)


def test_find_copy_examples():
    tri = FiniteGraph.from_edges(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert find_copy(tri, 16) == {"a": 0, "b": 1, "c": 3}
    assert find_copy(FiniteGraph.from_edges(["a"], []), 0) == {"a": 0}
    ind = FiniteGraph.from_edges(["a", "b", "c"], [])
    assert find_copy(ind, 16) == {"a": 0, "b": 2, "c": 8}
    assert find_copy(ind, 7) is None


@settings(max_examples=40)
@given(st.integers(1, 6), st.data())
def test_find_copy_reproduces_graph(n, data):
    pairs = list(combinations(range(n), 2))
    edges = [e for e in pairs if data.draw(st.booleans())]
    H = FiniteGraph.from_edges(range(n), edges)
    emb = find_copy(H, greedy_clique(8)[-1])
    assert emb is not None
    image = induced_subgraph(emb.values())
    for u, v in pairs:
        assert H.adjacent(u, v) == image.adjacent(emb[u], emb[v])


def test_greedy_sequences():
    assert greedy_clique(5) == [0, 1, 3, 11, 2059]
    assert greedy_independent(4) == [0, 2, 8, 10]
    assert induced_subgraph(greedy_independent(6)).edges() == []
