"""Desk-scale Ramsey checks for ordered graphs, and copy finders for samples.

Ordered graphs are FiniteGraphs whose vertex sequence is the order.  A copy
of B in A is an increasing choice of A-vertices inducing the same adjacency.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .behavior import COLLAPSED
from .core import FiniteGraph, RadoError, bit_adjacent
from .naturals import Nat
from .operations import FunctionSample


class BudgetExceeded(RadoError):
    def __init__(self, explored: int, budget: int):
        super().__init__(f"budget of {budget} exceeded after exploring {explored} colorings")
        self.explored = explored
        self.budget = budget


def ordered_graph(n: int, edges: Iterable[tuple[int, int]]) -> FiniteGraph:
    return FiniteGraph.from_edges(range(n), edges)


def complete(n: int) -> FiniteGraph:
    return ordered_graph(n, combinations(range(n), 2))


def empty(n: int) -> FiniteGraph:
    return ordered_graph(n, ())


def path(n: int) -> FiniteGraph:
    return ordered_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> FiniteGraph:
    return ordered_graph(n, [(i, (i + 1) % n) for i in range(n)])


_NAMED = {"K": complete, "I": empty, "P": path, "C": cycle}


def parse_graph(text: str) -> FiniteGraph:
    """``K6``, ``I3``, ``P4``, ``C5`` or ``n:a-b,c-d`` (vertices 0..n-1 in order)."""
    text = text.strip()
    m = re.fullmatch(r"([KIPC])(\d+)", text)
    if m:
        return _NAMED[m.group(1)](int(m.group(2)))
    m = re.fullmatch(r"(\d+):(.*)", text)
    if m:
        n = int(m.group(1))
        edges = []
        for part in filter(None, (p.strip() for p in m.group(2).split(","))):
            a, _, b = part.partition("-")
            try:
                a, b = int(a), int(b)
            except ValueError:
                raise RadoError(f"bad edge {part!r} in {text!r}") from None
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise RadoError(f"bad edge {part!r} in {text!r}")
            edges.append((a, b))
        return ordered_graph(n, edges)
    raise RadoError(f"cannot parse graph {text!r}")


def graph_string(g: FiniteGraph) -> str:
    idx = {v: i for i, v in enumerate(g.vertices)}
    edges = sorted((min(idx[u], idx[v]), max(idx[u], idx[v])) for u, v in g.edges())
    return f"{len(g)}:" + ",".join(f"{a}-{b}" for a, b in edges)


def copies_of(A: FiniteGraph, B: FiniteGraph) -> list[tuple]:
    """All order- and adjacency-preserving embeddings of B into A, as tuples of A-vertices."""
    n, m = len(A), len(B)
    a, b = A.adj.tolist(), B.adj.tolist()
    out: list[tuple] = []
    chosen: list[int] = []

    def go(start: int):
        j = len(chosen)
        if j == m:
            out.append(tuple(A.vertices[i] for i in chosen))
            return
        for i in range(start, n - (m - j) + 1):
            if all(a[i][chosen[t]] == b[j][t] for t in range(j)):
                chosen.append(i)
                go(i + 1)
                chosen.pop()

    go(0)
    return out


@dataclass
class ArrowResult:
    arrow: bool
    witness: list[int] | None
    explored: int
    p_copies: list[tuple]

    def to_json(self) -> dict:
        out = {"arrow": self.arrow, "explored": self.explored, "p_copies": len(self.p_copies)}
        if self.witness is not None:
            out["witness"] = {str(i): c for i, c in enumerate(self.witness)}
        return out


def _h_members(S: FiniteGraph, H: FiniteGraph, P: FiniteGraph):
    pcopies = copies_of(S, P)
    index = {c: i for i, c in enumerate(pcopies)}
    inner = copies_of(H, P)
    hpos = {v: i for i, v in enumerate(H.vertices)}
    members = []
    for hc in copies_of(S, H):
        members.append(sorted(index[tuple(hc[hpos[v]] for v in pc)] for pc in inner))
    return pcopies, members


def _is_bad(coloring: Sequence[int], members: Sequence[Sequence[int]]) -> bool:
    """True when no H-copy is monochromatic on its P-copies."""
    return all(len({coloring[i] for i in mem}) > 1 for mem in members)


def arrow_check(
    S: FiniteGraph, H: FiniteGraph, P: FiniteGraph, k: int, budget: int | None = None
) -> ArrowResult:
    """Decide S -> (H)^P_k by backtracking over colorings of the P-copies in S.

    Colors are introduced in order (a new color is at most one more than the
    largest used), which is safe since the property ignores color names.  A
    branch is closed early when a fully colored H-copy is monochromatic, and
    succeeds early once every H-copy is bichromatic.
    """
    if k < 1:
        raise RadoError("k must be at least 1")
    pcopies, members = _h_members(S, H, P)
    n = len(pcopies)
    if not members:
        return ArrowResult(False, [0] * n, 0, pcopies)
    if any(len(mem) <= 1 for mem in members):
        # a copy with at most one P-copy is monochromatic under every coloring
        return ArrowResult(True, None, 0, pcopies)
    containing: list[list[int]] = [[] for _ in range(n)]
    for h, mem in enumerate(members):
        for i in mem:
            containing[i].append(h)
    size = [len(mem) for mem in members]
    ncol = [0] * len(members)
    first = [-1] * len(members)
    mixed = [False] * len(members)
    coloring = [-1] * n
    dead = 0
    explored = 0

    def go(i: int, top: int) -> bool:
        nonlocal dead, explored
        if dead == len(members):
            for j in range(i, n):
                coloring[j] = 0
            return True
        if i == n:
            return False
        for c in range(min(k, top + 2)):
            explored += 1
            if budget is not None and explored > budget:
                raise BudgetExceeded(explored, budget)
            coloring[i] = c
            newly = []
            clash = False
            for h in containing[i]:
                ncol[h] += 1
                if ncol[h] == 1:
                    first[h] = c
                elif not mixed[h] and first[h] != c:
                    mixed[h] = True
                    newly.append(h)
                if ncol[h] == size[h] and not mixed[h]:
                    clash = True
            dead += len(newly)
            if not clash and go(i + 1, max(top, c)):
                return True
            dead -= len(newly)
            for h in newly:
                mixed[h] = False
            for h in containing[i]:
                ncol[h] -= 1
            coloring[i] = -1
        return False

    found = go(0, -1)
    if found:
        return ArrowResult(False, list(coloring), explored, pcopies)
    return ArrowResult(True, None, explored, pcopies)


def arrow_check_naive(S: FiniteGraph, H: FiniteGraph, P: FiniteGraph, k: int) -> bool:
    """Plain enumeration of all k^n colorings; the oracle for arrow_check."""
    pcopies, members = _h_members(S, H, P)
    for coloring in product(range(k), repeat=len(pcopies)):
        if _is_bad(coloring, members):
            return False
    return True


def verify_witness(S: FiniteGraph, H: FiniteGraph, P: FiniteGraph, k: int, coloring: Sequence[int]) -> bool:
    """A witness is valid when it uses colors below k and leaves no H-copy monochromatic."""
    pcopies, members = _h_members(S, H, P)
    if len(coloring) != len(pcopies) or any(not 0 <= c < k for c in coloring):
        return False
    return _is_bad(coloring, members)


def graphs_of_size(n: int):
    """Every ordered graph on 0..n-1, by edge bitmask over pairs in lex order.

    Order-preserving isomorphisms of ordered graphs are identities, so each
    mask is its own canonical form and no deduplication is needed.
    """
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield mask, ordered_graph(n, [p for b, p in enumerate(pairs) if mask >> b & 1])


def _check_one(args):
    S, H, P, k, budget = args
    return arrow_check(S, H, P, k, budget).arrow


def arrow_search(
    H: FiniteGraph,
    P: FiniteGraph,
    k: int,
    max_size: int,
    budget: int | None = None,
    jobs: int = 1,
) -> FiniteGraph | None:
    """First ordered graph S (by size, then edge mask) with S -> (H)^P_k."""
    for n in range(max(len(H), 1), max_size + 1):
        cands = [S for _, S in graphs_of_size(n) if copies_of(S, H)]
        if jobs > 1 and len(cands) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                verdicts = list(ex.map(_check_one, [(S, H, P, k, budget) for S in cands], chunksize=16))
        else:
            verdicts = (_check_one((S, H, P, k, budget)) for S in cands)
        for S, ok in zip(cands, verdicts):
            if ok:
                return S
    return None


# copies on which a sample behaves canonically

def _pair_color(f: FunctionSample, u: Nat, v: Nat) -> str:
    fu, fv = f(u), f(v)
    if fu == fv:
        return COLLAPSED
    return "E" if bit_adjacent(fu, fv) else "N"


def profile_parts(target: FiniteGraph, constants: Sequence) -> list[list]:
    """Constants as singletons, then the rest grouped by adjacency to the constants."""
    parts: list[list] = [[c] for c in constants]
    groups: dict[tuple, list] = {}
    for v in target.vertices:
        if v in constants:
            continue
        key = tuple(target.adjacent(v, c) for c in constants)
        groups.setdefault(key, []).append(v)
    # deterministic order: by profile, edges to constants first
    for key in sorted(groups, reverse=True):
        parts.append(groups[key])
    return parts


def find_canonical_copy(
    f: FunctionSample,
    target: FiniteGraph,
    region: Iterable[Nat],
    constants: Mapping | None = None,
) -> dict | None:
    """Lex-first induced copy of target in region on which f is canonical
    with respect to the profile partition.

    ``constants`` maps some target vertices to fixed region vertices.  The
    other target vertices go to increasing region vertices in target order.
    Returns the embedding, or None if region holds no such copy.
    """
    constants = dict(constants or {})
    region = sorted(set(region))
    if f.arity != 1:
        raise RadoError("expected a unary sample")
    for c, w in constants.items():
        if c not in target.vertices:
            raise RadoError(f"{c!r} is not a target vertex")
        if w not in region:
            raise RadoError(f"constant image {w} is not in the region")
    missing = [x for x in region if (x,) not in f]
    if missing:
        raise RadoError(f"sample undefined on {missing[:5]}")
    parts = profile_parts(target, list(constants))
    part_of = {v: i for i, p in enumerate(parts) for v in p}
    free = [v for v in target.vertices if v not in constants]
    fixed_images = set(constants.values())
    pool = [x for x in region if x not in fixed_images]
    emb: dict = dict(constants)
    # colors seen per (part pair, relation)
    seen: dict[tuple, str] = {}

    def place(v, x) -> list | None:
        """Record colors for pairs (v, placed); None on conflict, else keys added."""
        added = []
        for u, y in emb.items():
            rel = target.adjacent(u, v)
            if bit_adjacent(x, y) != rel:
                break
            a, b = sorted((part_of[u], part_of[v]))
            key = (a, b, rel)
            col = _pair_color(f, x, y)
            if key in seen:
                if seen[key] != col:
                    break
            else:
                seen[key] = col
                added.append(key)
        else:
            return added
        for key in added:
            del seen[key]
        return None

    # constants must themselves agree with the target among each other
    for (c1, w1), (c2, w2) in combinations(list(constants.items()), 2):
        if bit_adjacent(w1, w2) != target.adjacent(c1, c2):
            return None
    emb = {}
    for c, w in constants.items():
        added = place(c, w)
        if added is None:
            return None
        emb[c] = w

    def go(j: int, start: int) -> bool:
        if j == len(free):
            return True
        v = free[j]
        for t in range(start, len(pool) - (len(free) - j) + 1):
            x = pool[t]
            added = place(v, x)
            if added is None:
                continue
            emb[v] = x
            if go(j + 1, t + 1):
                return True
            del emb[v]
            for key in added:
                del seen[key]
        return False

    if go(0, 0):
        return {v: emb[v] for v in target.vertices}
    return None


def find_mono_copy(f: FunctionSample, H: FiniteGraph, region: Iterable[Nat]) -> dict | None:
    """Lex-first copy of H in region on which f colors all edges alike and all non-edges alike."""
    return find_canonical_copy(f, H, region)
