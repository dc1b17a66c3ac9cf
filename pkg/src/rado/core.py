"""The BIT model of the random graph and its finite induced pieces.

Vertices are naturals; for m < n, m ~ n iff bit m of n is set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .naturals import BigNat, Nat, NatCodec, bit, bits_of, from_bits, is_nat, succ


class RadoError(ValueError):
    """A precondition of a graph construction was violated."""


def bit_adjacent(u: Nat, v: Nat) -> bool:
    if u == v:
        return False
    if u < v:
        return bit(v, u)
    return bit(u, v)


def find_witness(U: Iterable[Nat], Uprime: Iterable[Nat]) -> Nat:
    """Least vertex above U and Uprime that is adjacent to all of U and to none of Uprime.

    Works on bit sets directly, so it is exact even when the answer is far
    too large to scan for.
    """
    U = frozenset(U)
    W = frozenset(Uprime)
    if U & W:
        raise RadoError(f"witness sets overlap: {sorted(U & W)}")
    if not U and not W:
        return 0
    M = max(U | W)
    mbits = bits_of(M)
    # positions where copying M's bits would give the wrong answer
    bad = [p for p in U if p not in mbits] + [p for p in W if p in mbits]
    i = max(bad) if bad else 0
    while i in mbits or i in W:
        i = succ(i)
    high = {p for p in mbits if p > i}
    low = {p for p in U if p < i}
    return from_bits(high | {i} | low)


def _label_key(x):
    # vertices are naturals in practice; fall back to repr for other labels
    return (0, x) if is_nat(x) else (1, repr(x))


class FiniteGraph:
    """A finite graph with an ordered vertex sequence and a boolean adjacency matrix."""

    __slots__ = ("vertices", "adj", "_index")

    def __init__(self, vertices: Sequence[Hashable], adj):
        self.vertices = tuple(vertices)
        n = len(self.vertices)
        a = np.asarray(adj, dtype=bool).reshape(n, n)
        if len(set(self.vertices)) != n:
            raise RadoError("repeated vertex label")
        if not np.array_equal(a, a.T):
            raise RadoError("adjacency is not symmetric")
        if n and a.diagonal().any():
            raise RadoError("adjacency is not irreflexive")
        a = a.copy()
        a.setflags(write=False)
        self.adj = a
        self._index = {v: i for i, v in enumerate(self.vertices)}

    @classmethod
    def from_edges(cls, vertices: Sequence[Hashable], edges: Iterable[tuple]) -> FiniteGraph:
        vertices = tuple(vertices)
        idx = {v: i for i, v in enumerate(vertices)}
        a = np.zeros((len(vertices), len(vertices)), dtype=bool)
        for u, v in edges:
            a[idx[u], idx[v]] = a[idx[v], idx[u]] = True
        return cls(vertices, a)

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGraph)
            and self.vertices == other.vertices
            and np.array_equal(self.adj, other.adj)
        )

    def __hash__(self):
        return hash((self.vertices, self.adj.tobytes()))

    def __repr__(self):
        return f"FiniteGraph({len(self)} vertices, {len(self.edges())} edges)"

    def index(self, v) -> int:
        return self._index[v]

    def adjacent(self, u, v) -> bool:
        return bool(self.adj[self._index[u], self._index[v]])

    def neighbors(self, v) -> list:
        row = self.adj[self._index[v]]
        return [self.vertices[j] for j in np.flatnonzero(row)]

    def edges(self) -> list[tuple]:
        out = []
        for i, j in zip(*np.nonzero(np.triu(self.adj, 1))):
            u, v = self.vertices[i], self.vertices[j]
            if _label_key(v) < _label_key(u):
                u, v = v, u
            out.append((u, v))
        return sorted(out, key=lambda e: (_label_key(e[0]), _label_key(e[1])))

    def induced(self, subset: Iterable) -> FiniteGraph:
        keep = [v for v in self.vertices if v in set(subset)]
        ix = [self._index[v] for v in keep]
        return FiniteGraph(keep, self.adj[np.ix_(ix, ix)])

    def relabel(self, mapping: Mapping) -> FiniteGraph:
        return FiniteGraph([mapping[v] for v in self.vertices], self.adj)

    def is_bit_induced(self) -> bool:
        """Whether the labels are naturals and adjacency agrees with the BIT model."""
        if not all(is_nat(v) for v in self.vertices):
            return False
        n = len(self)
        return all(
            bool(self.adj[i, j]) == bit_adjacent(self.vertices[i], self.vertices[j])
            for i in range(n)
            for j in range(i + 1, n)
        )

    def to_json(self, codec: NatCodec | None = None) -> dict:
        own = codec is None
        codec = codec or NatCodec()
        out = {
            "vertices": [codec.encode(v) for v in sorted(self.vertices, key=_label_key)],
            "edges": [[codec.encode(u), codec.encode(v)] for u, v in self.edges()],
        }
        return codec.wrap(out) if own else out

    @classmethod
    def from_json(cls, data: Mapping) -> FiniteGraph:
        decode = NatCodec.decoder(data.get("naturals"))
        vertices = [decode(v) for v in data["vertices"]]
        edges = [(decode(u), decode(v)) for u, v in data.get("edges", [])]
        return cls.from_edges(vertices, edges)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in sorted(self.vertices, key=_label_key):
            lines.append(f'  "{v}";')
        for u, v in self.edges():
            lines.append(f'  "{u}" -- "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def induced_subgraph(S: Iterable[Nat]) -> FiniteGraph:
    verts = sorted(set(S))
    n = len(verts)
    a = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if bit(verts[j], verts[i]):
                a[i, j] = a[j, i] = True
    return FiniteGraph(verts, a)


@dataclass(frozen=True)
class PartialIso:
    """A finite isomorphism between induced subgraphs of the BIT model."""

    pairs: Mapping[Nat, Nat] = field(default_factory=dict)

    def __post_init__(self):
        pairs = dict(self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if len(set(pairs.values())) != len(pairs):
            raise RadoError("partial isomorphism is not injective")
        items = list(pairs.items())
        for i, (u, fu) in enumerate(items):
            for v, fv in items[i + 1:]:
                if bit_adjacent(u, v) != bit_adjacent(fu, fv):
                    raise RadoError(f"map does not preserve adjacency on {u},{v}")

    def __hash__(self):
        return hash(frozenset(self.pairs.items()))

    def __call__(self, v: Nat) -> Nat:
        return self.pairs[v]

    def __len__(self):
        return len(self.pairs)

    @property
    def domain(self) -> frozenset:
        return frozenset(self.pairs)

    @property
    def image(self) -> frozenset:
        return frozenset(self.pairs.values())

    def inverse(self) -> PartialIso:
        return PartialIso({w: v for v, w in self.pairs.items()})

    def compose(self, other: PartialIso) -> PartialIso:
        """self after other, on the part of other's domain that lands in self's domain."""
        return PartialIso({v: self.pairs[w] for v, w in other.pairs.items() if w in self.pairs})

    def to_json(self, codec: NatCodec | None = None) -> dict:
        own = codec is None
        codec = codec or NatCodec()
        out = {"pairs": [[codec.encode(v), codec.encode(w)] for v, w in sorted(self.pairs.items())]}
        return codec.wrap(out) if own else out

    @classmethod
    def from_json(cls, data: Mapping) -> PartialIso:
        decode = NatCodec.decoder(data.get("naturals"))
        return cls({decode(v): decode(w) for v, w in data["pairs"]})


def extend_iso(p: PartialIso, v: Nat) -> PartialIso:
    """One forth step: send v to the least vertex with the right adjacencies."""
    if v in p.pairs:
        raise RadoError(f"{v} is already in the domain")
    U = [w for u, w in p.pairs.items() if bit_adjacent(u, v)]
    W = [w for u, w in p.pairs.items() if not bit_adjacent(u, v)]
    pairs = dict(p.pairs)
    pairs[v] = find_witness(U, W)
    return PartialIso(pairs)


def find_copy(H: FiniteGraph, bound: Nat) -> dict | None:
    """Greedy induced embedding of H into the BIT model, or None if it leaves {0..bound}."""
    emb: dict = {}
    for v in H.vertices:
        U = [emb[u] for u in emb if H.adjacent(u, v)]
        W = [emb[u] for u in emb if not H.adjacent(u, v)]
        w = find_witness(U, W)
        if w > bound:
            return None
        emb[v] = w
    return emb


def greedy_clique(k: int) -> list[Nat]:
    out: list[Nat] = []
    for _ in range(k):
        out.append(find_witness(out, ()))
    return out


def greedy_independent(k: int) -> list[Nat]:
    out: list[Nat] = []
    for _ in range(k):
        out.append(find_witness((), out))
    return out


__all__ = [
    "BigNat",
    "FiniteGraph",
    "PartialIso",
    "RadoError",
    "bit_adjacent",
    "extend_iso",
    "find_copy",
    "find_witness",
    "greedy_clique",
    "greedy_independent",
    "induced_subgraph",
]
