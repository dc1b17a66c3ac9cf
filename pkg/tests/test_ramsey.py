from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rado.behavior import classify_unary, is_canonical_partitioned
from rado.core import RadoError, induced_subgraph
from rado.operations import FunctionSample, make_minus, make_switch
from rado.ramsey import (
    BudgetExceeded,
    arrow_check,
    arrow_check_naive,
    arrow_search,
    complete,
    copies_of,
    cycle,
    empty,
    find_canonical_copy,
    find_mono_copy,
    graph_string,
    ordered_graph,
    parse_graph,
    path,
    profile_parts,
    verify_witness,
)

K2, K3, I1 = complete(2), complete(3), empty(1)


def random_graph(rng, n, p=0.5):
    return ordered_graph(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def test_copies_examples():
    assert len(copies_of(K3, K2)) == 3
    assert len(copies_of(path(3), K2)) == 2
    assert len(copies_of(cycle(5), I1)) == 5


def test_parse_graph_roundtrip():
    for text in ("K4", "I3", "P4", "C5", "4:0-1,2-3"):
        g = parse_graph(text)
        assert parse_graph(graph_string(g)) == g
    with pytest.raises((RadoError, ValueError)):
        parse_graph("Q7")


def test_k6_arrows_triangle():
    assert arrow_check(complete(6), K3, K2, 2).arrow


def test_k5_has_witness():
    res = arrow_check(complete(5), K3, K2, 2)
    assert not res.arrow
    assert verify_witness(complete(5), K3, K2, 2, res.witness)
    # the witness colors each vertex's four edges two and two: a pentagon and its complement
    color0 = [res.p_copies[i] for i, c in enumerate(res.witness) if c == 0]
    assert len(color0) == 5
    degrees = [sum(v in e for e in color0) for v in range(5)]
    assert degrees == [2] * 5


@pytest.mark.parametrize("H", [K2, K3, path(3), empty(2)])
def test_single_copy_arrows(H):
    assert arrow_check(H, H, H, 3).arrow


def test_no_copy_of_H_means_no_arrow():
    assert not arrow_check(empty(4), K2, I1, 2).arrow


def test_budget():
    with pytest.raises(BudgetExceeded):
        arrow_check(complete(6), K3, K2, 2, budget=10)


def test_arrow_search_examples():
    assert graph_string(arrow_search(K2, I1, 2, 4)) == "3:0-1,0-2,1-2"
    assert graph_string(arrow_search(I1, I1, 2, 3)) == "1:"
    assert arrow_search(K3, K2, 2, 5) is None
    assert graph_string(arrow_search(K2, I1, 3, 5)) == graph_string(complete(4))


def test_arrow_search_parallel_agrees():
    assert graph_string(arrow_search(K2, I1, 3, 5, jobs=2)) == graph_string(complete(4))


def test_pruned_agrees_with_naive():
    rng = random.Random(7)
    done = 0
    while done < 25:
        S = random_graph(rng, rng.randint(3, 6))
        H = rng.choice([K2, K3, path(3), empty(2)])
        P = rng.choice([I1, K2])
        k = rng.choice([2, 3])
        n = len(copies_of(S, P))
        if k ** n > 2**12:
            continue
        res = arrow_check(S, H, P, k)
        assert res.arrow == arrow_check_naive(S, H, P, k)
        if not res.arrow:
            assert verify_witness(S, H, P, k, res.witness)
        done += 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**16), st.integers(3, 5))
def test_monotone_in_S(seed, n):
    rng = random.Random(seed)
    S = random_graph(rng, n)
    if not arrow_check(S, K2, I1, 2).arrow:
        return
    # add a vertex anywhere in the order with random edges
    pos = rng.randint(0, n)
    relabel = [v if v < pos else v + 1 for v in range(n)]
    edges = [(relabel[a], relabel[b]) for a, b in S.edges()]
    edges += [tuple(sorted((pos, relabel[v]))) for v in range(n) if rng.random() < 0.5]
    assert arrow_check(ordered_graph(n + 1, edges), K2, I1, 2).arrow


def test_mono_copy_minus_takes_first_copy():
    region = range(21)
    f = make_minus(region)
    emb = find_mono_copy(f, cycle(4), region)
    assert emb == {0: 0, 1: 1, 2: 2, 3: 5}
    image = induced_subgraph(emb.values())
    assert classify_unary(f, image).kind == "minus"


def test_mono_copy_avoids_collapsed_edge():
    region = list(range(12))
    f = FunctionSample(1, {(x,): (0 if x == 1 else x) for x in region})
    P3 = path(3)
    assert find_mono_copy(FunctionSample(1, {(x,): x for x in region}), P3, region) == {0: 0, 1: 1, 2: 2}
    emb = find_mono_copy(f, P3, region)
    used = set(emb.values())
    assert not {0, 1} <= used
    assert len({f(v) for v in used}) == 3


def test_mono_copy_too_big():
    f = make_minus(range(4))
    assert find_mono_copy(f, complete(5), range(4)) is None


def test_canonical_copy_with_constant():
    region = range(21)
    f = make_switch({0}, region)
    target = cycle(4)
    emb = find_canonical_copy(f, target, region, {0: 0})
    assert emb[0] == 0
    parts = [[emb[v] for v in p] for p in profile_parts(target, [0])]
    assert is_canonical_partitioned(f, induced_subgraph(emb.values()), parts).canonical


def test_canonical_copy_region_too_small():
    f = make_switch({0}, range(3))
    assert find_canonical_copy(f, complete(4), range(3), {0: 0}) is None


def test_canonical_copy_without_constants_is_mono_copy():
    region = range(16)
    f = make_minus(region)
    assert find_canonical_copy(f, path(4), region) == find_mono_copy(f, path(4), region)
