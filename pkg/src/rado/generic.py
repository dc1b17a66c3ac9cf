"""Lazily built generic graphs and ordered graphs.

The BIT model with its natural order is not a random ordered graph: there is
never a witness below 0, and witnesses are always placed above everything
seen so far.  A GenericStructure instead grows on demand from a constraint
store.  New nodes get exactly the adjacencies asked for; every other pair is
settled by a seeded hash the first time it is touched and is then frozen.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import FiniteGraph, RadoError

GRAPH = "graph"
ORDERED = "ordered-graph"

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


@dataclass(frozen=True)
class NodeConstraint:
    adjacent_to: frozenset = frozenset()
    non_adjacent_to: frozenset = frozenset()
    # open interval (lo, hi); None stands for minus or plus infinity
    interval: tuple[Fraction | None, Fraction | None] | None = None

    def __post_init__(self):
        object.__setattr__(self, "adjacent_to", frozenset(self.adjacent_to))
        object.__setattr__(self, "non_adjacent_to", frozenset(self.non_adjacent_to))
        if self.adjacent_to & self.non_adjacent_to:
            raise RadoError(
                f"contradictory constraint on nodes {sorted(self.adjacent_to & self.non_adjacent_to)}"
            )


class GenericStructure:
    def __init__(self, signature: str = GRAPH, seed: int = 0):
        if signature not in (GRAPH, ORDERED):
            raise RadoError(f"unknown signature {signature!r}")
        self.signature = signature
        self.seed = seed & _MASK
        self.nodes: list[int] = []
        self.decided: dict[tuple[int, int], bool] = {}
        self.constrained: set[tuple[int, int]] = set()
        self.positions: dict[int, Fraction] = {}

    @property
    def ordered(self) -> bool:
        return self.signature == ORDERED

    def _default(self, a: int, b: int) -> bool:
        return bool(splitmix64(self.seed ^ splitmix64((a << 32) | b)) & 1)

    def _check_node(self, a: int):
        if not (0 <= a < len(self.nodes)):
            raise RadoError(f"no node {a}")

    def _place(self, interval) -> Fraction:
        lo, hi = interval if interval is not None else (None, None)
        lo = None if lo is None else Fraction(lo)
        hi = None if hi is None else Fraction(hi)
        if lo is not None and hi is not None and not lo < hi:
            raise RadoError(f"empty interval ({lo}, {hi})")
        pos = sorted(self.positions.values())
        if lo is None and hi is None:
            return pos[-1] + 1 if pos else Fraction(0)
        if lo is None:
            return min(pos[0], hi) - 1 if pos else hi - 1
        # nearest existing position above lo, so the new one cannot collide
        above = [p for p in pos if p > lo]
        nxt = above[0] if above else None
        if hi is not None and (nxt is None or hi < nxt):
            nxt = hi
        if nxt is None:
            return lo + 1
        return Fraction(lo.numerator + nxt.numerator, lo.denominator + nxt.denominator)

    def fresh_node(self, c: NodeConstraint | None = None) -> int:
        c = c or NodeConstraint()
        for a in c.adjacent_to | c.non_adjacent_to:
            self._check_node(a)
        if c.interval is not None and not self.ordered:
            raise RadoError("position interval given for an unordered structure")
        if self.ordered:
            position = self._place(c.interval)
        new = len(self.nodes)
        self.nodes.append(new)
        if self.ordered:
            self.positions[new] = position
        for a in range(new):
            key = (a, new)
            if a in c.adjacent_to:
                self.decided[key] = True
                self.constrained.add(key)
            elif a in c.non_adjacent_to:
                self.decided[key] = False
                self.constrained.add(key)
            else:
                self.decided[key] = self._default(a, new)
        return new

    def query_edge(self, a: int, b: int) -> bool:
        self._check_node(a)
        self._check_node(b)
        if a == b:
            return False
        key = (min(a, b), max(a, b))
        if key not in self.decided:
            self.decided[key] = self._default(*key)
        return self.decided[key]

    def query_before(self, a: int, b: int) -> bool:
        if not self.ordered:
            raise RadoError("structure has no order")
        self._check_node(a)
        self._check_node(b)
        return self.positions[a] < self.positions[b]

    def position(self, a: int) -> Fraction:
        return self.positions[a]

    def sorted_nodes(self, nodes: Iterable[int] | None = None) -> list[int]:
        nodes = list(self.nodes if nodes is None else nodes)
        if self.ordered:
            return sorted(nodes, key=self.positions.__getitem__)
        return sorted(nodes)

    def export(self, nodes: Iterable[int] | None = None) -> FiniteGraph:
        """Induced graph on ``nodes``, listed in the structure's order."""
        vs = self.sorted_nodes(nodes)
        edges = [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:] if self.query_edge(a, b)]
        return FiniteGraph.from_edges(vs, edges)

    def snapshot(self) -> dict:
        edges = sorted([a, b] for (a, b), e in self.decided.items() if e)
        out = {"nodes": len(self.nodes), "edges": edges}
        if self.ordered:
            out["positions"] = [_frac(self.positions[a]) for a in self.nodes]
        return out

    def to_json(self) -> str:
        return json.dumps(self.snapshot(), sort_keys=True)


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"
