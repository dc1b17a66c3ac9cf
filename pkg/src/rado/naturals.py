"""Natural numbers that may be too large to hold as a Python ``int``.

Vertices of the BIT graph are naturals, and adjacency is "bit m of n".  Any
clique in that graph grows like a tower of twos (0, 1, 3, 11, 2059, ...), so
the seventh vertex of the least clique already has a bit at position
~2**2059.  Such numbers are stored as a :class:`BigNat`: the frozenset of
their bit positions, each position itself a natural.  This is the Ackermann
coding of hereditarily finite sets, so nothing about the graph changes; only
the storage does.

Canonical form: a natural below ``2**INT_BITS`` is always a plain ``int``;
anything at or above is always a ``BigNat``.  Equality, hashing and ordering
therefore work across both kinds.
"""

from __future__ import annotations

from functools import lru_cache, total_ordering
from typing import Iterable, Union

INT_BITS = 4096
_INT_LIMIT = 1 << INT_BITS


@total_ordering
class BigNat:
    __slots__ = ("bits", "_desc", "_hash")

    def __init__(self, bits: Iterable[Nat]):
        self.bits = frozenset(bits)
        self._desc = None
        self._hash = None

    @property
    def desc(self) -> tuple:
        if self._desc is None:
            self._desc = tuple(sorted(self.bits, reverse=True))
        return self._desc

    @property
    def top(self) -> Nat:
        return self.desc[0]

    def __eq__(self, other):
        if isinstance(other, BigNat):
            return self is other or (hash(self) == hash(other) and self.bits == other.bits)
        if isinstance(other, int):
            return False
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, int):
            return False
        if isinstance(other, BigNat):
            # numbers compare by their highest differing bit
            return self.desc < other.desc
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("BigNat", self.bits))
        return self._hash

    def __repr__(self):
        return f"BigNat(2^{_short(self.top)} + ..., {len(self.bits)} bits)"


Nat = Union[int, BigNat]


def _short(n: Nat) -> str:
    if isinstance(n, int):
        return str(n) if n < 10**12 else f"<{n.bit_length()}-bit int>"
    return f"({_short(n.top)})"


def is_nat(x) -> bool:
    return isinstance(x, BigNat) or (isinstance(x, int) and not isinstance(x, bool) and x >= 0)


@lru_cache(maxsize=1 << 16)
def _int_bits(n: int) -> frozenset:
    out = []
    while n:
        low = n & -n
        pos = low.bit_length() - 1
        out.append(pos)
        n ^= low
    return frozenset(out)


def bits_of(n: Nat) -> frozenset:
    """Set of bit positions of ``n``."""
    if isinstance(n, BigNat):
        return n.bits
    return _int_bits(n)


def from_bits(positions: Iterable[Nat]) -> Nat:
    """The natural whose binary expansion has exactly ``positions`` set."""
    positions = frozenset(positions)
    if all(isinstance(p, int) and p < INT_BITS for p in positions):
        out = 0
        for p in positions:
            out |= 1 << p
        return out
    return BigNat(positions)


def bit(n: Nat, m: Nat) -> bool:
    """Bit ``m`` of ``n``."""
    if isinstance(n, BigNat):
        return m in n.bits
    if isinstance(m, BigNat):
        return False
    return (n >> m) & 1 == 1


def succ(n: Nat) -> Nat:
    if isinstance(n, int) and n + 1 < _INT_LIMIT:
        return n + 1
    b = bits_of(n)
    j = 0
    while j in b:
        j += 1
    return from_bits((b - set(range(j))) | {j})


class NatCodec:
    """JSON codec for vertices.

    Plain ints encode as JSON numbers.  A ``BigNat`` encodes as the string
    ``"#k"`` pointing into a table of bit lists; the table is emitted next to
    the payload.  Sharing matters: nested bit sets of tower-sized vertices
    repeat earlier vertices, and inlining them would blow up exponentially.
    """

    def __init__(self):
        self._index: dict[BigNat, int] = {}
        self._table: list = []

    def encode(self, n: Nat):
        if isinstance(n, int):
            return n
        if n not in self._index:
            # positions are smaller than n, so they get lower indices first
            bits = [self.encode(p) for p in sorted(n.bits)]
            self._index[n] = len(self._table)
            self._table.append(bits)
        return f"#{self._index[n]}"

    def table(self) -> list:
        return list(self._table)

    def wrap(self, payload: dict) -> dict:
        if self._table:
            payload = dict(payload)
            payload["naturals"] = self.table()
        return payload

    @staticmethod
    def decoder(table: list | None):
        cache: dict[int, Nat] = {}

        def decode(x) -> Nat:
            if isinstance(x, int):
                return x
            if isinstance(x, str) and x.startswith("#"):
                k = int(x[1:])
                if k not in cache:
                    cache[k] = from_bits(decode(p) for p in table[k])
                return cache[k]
            raise ValueError(f"not an encoded vertex: {x!r}")

        return decode
