"""Finite samples of operations on the BIT graph and their constructors.

Every constructor works the same way: walk the domain in a fixed order and
give each point the least vertex whose adjacencies to the images already
placed are the ones required.  Least witnesses always lie above everything
already placed, so images strictly increase in processing order.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .btypes import BinaryType, apply_bin, apply_un
from .core import RadoError, bit_adjacent, find_witness
from .naturals import Nat, NatCodec


class FunctionSample:
    """A finite partial function V^k -> V given by its table."""

    __slots__ = ("arity", "entries", "_image")

    def __init__(self, arity: int, entries: Mapping[tuple, Nat]):
        if arity < 1:
            raise RadoError("arity must be positive")
        entries = dict(entries)
        for t in entries:
            if len(t) != arity:
                raise RadoError(f"entry {t} has wrong arity")
        self.arity = arity
        self.entries = entries
        self._image = None

    @property
    def domain_grid(self) -> frozenset:
        return frozenset(self.entries)

    def __call__(self, *args: Nat) -> Nat:
        try:
            return self.entries[args]
        except KeyError:
            raise RadoError(f"sample undefined at {args}") from None

    def __contains__(self, args) -> bool:
        return tuple(args) in self.entries

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, FunctionSample) and self.arity == other.arity and self.entries == other.entries

    def __hash__(self):
        return hash((self.arity, frozenset(self.entries.items())))

    def __repr__(self):
        return f"FunctionSample(arity={self.arity}, {len(self.entries)} entries)"

    def image(self) -> frozenset:
        if self._image is None:
            self._image = frozenset(self.entries.values())
        return self._image

    @property
    def injective(self) -> bool:
        return len(self.image()) == len(self.entries)

    def coordinates(self, i: int) -> list[Nat]:
        """Sorted set of values taken by coordinate i on the grid."""
        return sorted({t[i] for t in self.entries})

    def restrict(self, grid: Iterable[tuple]) -> FunctionSample:
        return FunctionSample(self.arity, {t: self.entries[t] for t in grid})

    def to_json(self, codec: NatCodec | None = None) -> dict:
        own = codec is None
        codec = codec or NatCodec()
        rows = sorted(self.entries.items())
        out = {
            "arity": self.arity,
            "entries": [[[codec.encode(x) for x in t], codec.encode(y)] for t, y in rows],
        }
        return codec.wrap(out) if own else out

    @classmethod
    def from_json(cls, data: Mapping) -> FunctionSample:
        decode = NatCodec.decoder(data.get("naturals"))
        entries = {tuple(decode(x) for x in t): decode(y) for t, y in data["entries"]}
        return cls(int(data["arity"]), entries)


def compose(outer: FunctionSample, *inner: FunctionSample) -> FunctionSample:
    """outer(inner_1(t), ..., inner_k(t)) on the common grid of the inner samples."""
    if len(inner) != outer.arity:
        raise RadoError(f"outer has arity {outer.arity}, got {len(inner)} inner samples")
    arities = {g.arity for g in inner}
    if len(arities) != 1:
        raise RadoError("inner samples disagree on arity")
    grid = set(inner[0].entries)
    for g in inner[1:]:
        grid &= set(g.entries)
    return FunctionSample(
        inner[0].arity,
        {t: outer(*(g.entries[t] for g in inner)) for t in sorted(grid)},
    )


def _greedy_unary(order: Sequence[Nat], want: Callable[[Nat, Nat], bool]) -> FunctionSample:
    """Assign images along ``order``; want(s, t) is the required adjacency of f(s), f(t)."""
    images: dict[Nat, Nat] = {}
    for s in order:
        U = [images[t] for t in images if want(s, t)]
        W = [images[t] for t in images if not want(s, t)]
        images[s] = find_witness(U, W)
    return FunctionSample(1, {(s,): images[s] for s in order})


def make_identity(S: Iterable[Nat]) -> FunctionSample:
    return FunctionSample(1, {(s,): s for s in sorted(set(S))})


def make_constant(S: Iterable[Nat], c: Nat) -> FunctionSample:
    return FunctionSample(1, {(s,): c for s in sorted(set(S))})


def make_eE(S: Iterable[Nat]) -> FunctionSample:
    return _greedy_unary(sorted(set(S)), lambda s, t: True)


def make_eN(S: Iterable[Nat]) -> FunctionSample:
    return _greedy_unary(sorted(set(S)), lambda s, t: False)


def make_minus(S: Iterable[Nat]) -> FunctionSample:
    """Increasing map sending edges to non-edges and non-edges to edges."""
    return _greedy_unary(sorted(set(S)), lambda s, t: not bit_adjacent(s, t))


def make_switch(S_flip: Iterable[Nat], S: Iterable[Nat]) -> FunctionSample:
    """Flip adjacency exactly on pairs crossing the cut given by S_flip."""
    flip = frozenset(S_flip)
    if not flip:
        raise RadoError("switch needs a nonempty set to flip around")
    return _greedy_unary(
        sorted(set(S)),
        lambda s, t: bit_adjacent(s, t) != ((s in flip) != (t in flip)),
    )


def make_reversal(S: Iterable[Nat]) -> FunctionSample:
    """Adjacency-preserving map on S that reverses the natural order."""
    return _greedy_unary(sorted(set(S), reverse=True), bit_adjacent)


def required_relation(spec: BinaryType, x: tuple, y: tuple) -> bool:
    """Adjacency of f(x), f(y) dictated by spec, for distinct grid points x, y."""
    (x1, x2), (y1, y2) = x, y
    if x1 != y1 and x2 != y2:
        op = spec.straight if (x1 < y1) == (x2 < y2) else spec.twisted
        return apply_bin(op, bit_adjacent(x1, y1), bit_adjacent(x2, y2))
    if x2 == y2:
        return apply_un(spec.neq_eq, bit_adjacent(x1, y1))
    return apply_un(spec.eq_neq, bit_adjacent(x2, y2))


def make_binary_injection(
    spec: BinaryType,
    A: Iterable[Nat],
    B: Iterable[Nat],
    points: Iterable[tuple] | None = None,
) -> FunctionSample:
    """Injective sample on A x B with the behavior described by spec.

    Points are processed in lexicographic order when spec.order is p1 and in
    reverse-coordinate lexicographic order when it is p2; a decreasing spec
    walks that order backwards.  ``points`` restricts the grid to a subset.
    """
    if not spec.canonical:
        raise RadoError("cannot build a sample for a non-canonical type")
    if points is None:
        pts = list(product(sorted(set(A)), sorted(set(B))))
    else:
        pts = list(set(points))
    if spec.order == "p1":
        pts.sort()
    else:
        pts.sort(key=lambda p: (p[1], p[0]))
    if not spec.increasing:
        pts.reverse()
    images: dict[tuple, Nat] = {}
    for p in pts:
        U, W = [], []
        for q, fq in images.items():
            (U if required_relation(spec, p, q) else W).append(fq)
        images[p] = find_witness(U, W)
    return FunctionSample(2, {p: images[p] for p in sorted(images)})


def grid_sets(f: FunctionSample) -> tuple[list[Nat], ...]:
    return tuple(f.coordinates(i) for i in range(f.arity))


def dual(f: FunctionSample) -> FunctionSample:
    """Sample of (x, y) -> -f(-x, -y), transported along finite minus maps.

    With m = make_minus on the inputs and M = make_minus on the image, the
    result sends (m(a), m(b)) to M(f(a, b)).  Both maps are increasing, so
    the order behavior of f carries over unchanged.  Least witnesses always
    exist, so no bound is needed.
    """
    if f.arity != 2:
        raise RadoError("dual is defined here for binary samples")
    if not f.injective:
        raise RadoError("dual expects an injective sample")
    A, B = grid_sets(f)
    m = make_minus(set(A) | set(B))
    M = make_minus(f.image())
    return FunctionSample(
        2,
        {(m(a), m(b)): M(y) for (a, b), y in f.entries.items()},
    )


def preserved_pairs(f: FunctionSample) -> bool:
    """Whether a binary sample maps coordinatewise-E pairs to E and N to N,
    for pairs whose coordinates both differ."""
    items = list(f.entries.items())
    for i, ((x1, x2), fx) in enumerate(items):
        for (y1, y2), fy in items[i + 1:]:
            if x1 == y1 or x2 == y2:
                continue
            r1, r2 = bit_adjacent(x1, y1), bit_adjacent(x2, y2)
            if r1 == r2 and bit_adjacent(fx, fy) != r1:
                return False
    return True
