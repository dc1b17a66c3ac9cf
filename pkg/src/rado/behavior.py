"""Classifying the canonical behavior of function samples, and the type algebra.

Unary samples are judged by what they do to edges and to non-edges.  Binary
injections are judged by a :class:`~rado.btypes.BinaryType`.  Types of terms
built from typed binary symbols are predicted by composing "pair type" maps:
a pair of vertices is either equal or has a relation (E or N) and a direction
(< or >), and a canonical binary symbol sends a pair of pair types to a pair
type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence, Union

from .btypes import BIN_OPS, NONCANON, UN_OPS, BinaryType, apply_bin, apply_un
from .core import FiniteGraph, RadoError, bit_adjacent
from .naturals import Nat
from .operations import FunctionSample, make_binary_injection, make_reversal


class UnderWitnessedError(RadoError):
    """The sample does not contain enough pairs to decide a behavior."""


class TermError(RadoError):
    pass


# unary behavior

UNARY_KINDS = ("identity", "minus", "eE", "eN", "constant", "non-canonical")
COLLAPSED = "collapsed"

_UNARY_BY_COLORS = {
    ("E", "N"): "identity",
    ("N", "E"): "minus",
    ("E", "E"): "eE",
    ("N", "N"): "eN",
    (COLLAPSED, COLLAPSED): "constant",
}


@dataclass(frozen=True)
class UnaryBehavior:
    kind: str
    edge_colors: frozenset = frozenset()
    non_edge_colors: frozenset = frozenset()

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "edges": sorted(self.edge_colors),
            "non_edges": sorted(self.non_edge_colors),
        }


def _color(f: FunctionSample, u: Nat, v: Nat) -> str:
    fu, fv = f(u), f(v)
    if fu == fv:
        return COLLAPSED
    return "E" if bit_adjacent(fu, fv) else "N"


def _check_unary(f: FunctionSample, vertices: Iterable[Nat]):
    if f.arity != 1:
        raise RadoError("expected a unary sample")
    missing = [v for v in vertices if (v,) not in f]
    if missing:
        raise RadoError(f"sample undefined on {missing[:5]}")


def _pair_colors(f: FunctionSample, g: FiniteGraph, pairs) -> tuple[set, set]:
    edge, non_edge = set(), set()
    for u, v in pairs:
        (edge if g.adjacent(u, v) else non_edge).add(_color(f, u, v))
    return edge, non_edge


def _kind(edge: set, non_edge: set) -> str | None:
    """Kind from color sets; None when a relation is missing and the answer is open."""
    if len(edge) > 1 or len(non_edge) > 1:
        return NONCANON
    if not edge and not non_edge:
        return None
    if not edge or not non_edge:
        (only,) = edge or non_edge
        return "constant" if only == COLLAPSED else None
    key = (next(iter(edge)), next(iter(non_edge)))
    return _UNARY_BY_COLORS.get(key, NONCANON)


def classify_unary(f: FunctionSample, g: FiniteGraph) -> UnaryBehavior:
    """Which of identity, minus, eE, eN, constant the sample behaves like on g."""
    _check_unary(f, g.vertices)
    edge, non_edge = _pair_colors(f, g, combinations(g.vertices, 2))
    kind = _kind(edge, non_edge)
    if kind is None:
        raise UnderWitnessedError("graph needs both an edge and a non-edge to tell behaviors apart")
    return UnaryBehavior(kind, frozenset(edge), frozenset(non_edge))


_SYMBOL_BY_COLORS = {("E", "N"): "id", ("N", "E"): "minus", ("E", "E"): "E", ("N", "N"): "N"}


@dataclass
class PartitionedBehavior:
    canonical: bool
    table: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"canonical": self.canonical, "table": self.table}


def _single(colors: set):
    if not colors:
        return None
    if len(colors) > 1:
        return NONCANON
    return next(iter(colors))


def _part_symbol(e, n):
    if NONCANON in (e, n):
        return NONCANON
    if e is None and n is None:
        return None
    if e is None or n is None:
        # only one relation occurs; report what is known
        known = e if n is None else n
        return COLLAPSED if known == COLLAPSED else None
    if e == n == COLLAPSED:
        return COLLAPSED
    # constant per relation, possibly collapsing one relation only
    return _SYMBOL_BY_COLORS.get((e, n), f"{e}/{n}")


def is_canonical_partitioned(
    f: FunctionSample, g: FiniteGraph, parts: Sequence[Iterable[Nat]]
) -> PartitionedBehavior:
    """Canonicity with respect to a partition of g's vertices.

    The table has one row per part ("i") and per pair of parts ("i-j"),
    giving the image color of edges ("E" key) and of non-edges ("N" key), and
    the behavior symbol when both are known.  Canonical means each relation
    gets a single color in every row.
    """
    parts = [sorted(set(p)) for p in parts]
    allv = [v for p in parts for v in p]
    if len(set(allv)) != len(allv) or set(allv) != set(g.vertices):
        raise RadoError("parts must partition the graph's vertices")
    _check_unary(f, allv)
    table = {}
    ok = True
    groups = [(str(i), combinations(p, 2)) for i, p in enumerate(parts)]
    groups += [
        (f"{i}-{j}", product(parts[i], parts[j])) for i, j in combinations(range(len(parts)), 2)
    ]
    for name, pairs in groups:
        edge, non_edge = _pair_colors(f, g, pairs)
        e, n = _single(edge), _single(non_edge)
        if NONCANON in (e, n):
            ok = False
        table[name] = {"E": e, "N": n, "behavior": _part_symbol(e, n)}
    return PartitionedBehavior(ok, table)


# binary behavior

MIN_SIDE = 4


def _match_bin(table: Mapping[tuple[bool, bool], set]) -> str:
    if any(len(v) != 1 for v in table.values()):
        return NONCANON
    for op in BIN_OPS:
        if all(apply_bin(op, r1, r2) in outs for (r1, r2), outs in table.items()):
            return op
    return NONCANON


def _match_un(table: Mapping[bool, set]) -> str:
    if any(len(v) != 1 for v in table.values()):
        return NONCANON
    for op in UN_OPS:
        if all(apply_un(op, r) in outs for r, outs in table.items()):
            return op
    return NONCANON


def classify_binary(f: FunctionSample, order: Callable[[Nat], object] | None = None) -> BinaryType:
    """Binary type of an injective sample on a grid with at least four values per side.

    ``order`` maps vertices to sort keys; the default is the natural order.
    """
    if f.arity != 2:
        raise RadoError("expected a binary sample")
    if not f.injective:
        raise RadoError("classify_binary needs an injective sample")
    A, B = f.coordinates(0), f.coordinates(1)
    if len(A) < MIN_SIDE or len(B) < MIN_SIDE:
        raise UnderWitnessedError(f"grid {len(A)}x{len(B)} is below {MIN_SIDE} per side")
    key = order or (lambda x: x)
    rels = (True, False)
    straight = {(r1, r2): set() for r1 in rels for r2 in rels}
    twisted = {(r1, r2): set() for r1 in rels for r2 in rels}
    neq_eq = {r: set() for r in rels}
    eq_neq = {r: set() for r in rels}
    # hypotheses (coordinate, increasing) for which coordinate decides image order
    hyp = {("p1", True), ("p1", False), ("p2", True), ("p2", False)}
    items = list(f.entries.items())
    for i, ((x1, x2), fx) in enumerate(items):
        kx1, kx2, kfx = key(x1), key(x2), key(fx)
        for (y1, y2), fy in items[i + 1:]:
            out = bit_adjacent(fx, fy)
            if x1 != y1 and x2 != y2:
                r1, r2 = bit_adjacent(x1, y1), bit_adjacent(x2, y2)
                d1, d2 = kx1 < key(y1), kx2 < key(y2)
                (straight if d1 == d2 else twisted)[(r1, r2)].add(out)
                up = kfx < key(fy)
                hyp -= {h for h in hyp if (d1 if h[0] == "p1" else d2) == (up != h[1])}
            elif x2 == y2:
                neq_eq[bit_adjacent(x1, y1)].add(out)
            else:
                eq_neq[bit_adjacent(x2, y2)].add(out)
    tables = [straight, twisted, neq_eq, eq_neq]
    if any(not outs for t in tables for outs in t.values()):
        raise UnderWitnessedError("some input class has no witnessing pair on this grid")
    if len(hyp) == 1:
        ((ord_, inc),) = hyp
    else:
        ord_, inc = NONCANON, True
    return BinaryType(
        _match_bin(straight),
        _match_bin(twisted),
        _match_un(neq_eq),
        _match_un(eq_neq),
        ord_,
        inc,
    )


# minimality classes

CLASS_NAMES = {
    1: "projection and balanced",
    2: "max and balanced",
    3: "min and balanced",
    4: "max and E-dominated",
    5: "min and N-dominated",
    6: "projection and E-dominated",
    7: "projection and N-dominated",
    8: "p2 and E/id, or p1 and id/E",
    9: "p2 and N/id, or p1 and id/N",
}

NOT_MINIMAL = "not minimal"


def minimality_class(t: BinaryType) -> int | str:
    if not t.canonical:
        raise RadoError("minimality is only defined for canonical types")
    if t.straight != t.twisted:
        return NOT_MINIMAL
    op = t.straight
    proj = op in ("p1", "p2")
    un = (t.neq_eq, t.eq_neq)
    if un == ("id", "id"):
        return 1 if proj else (2 if op == "max" else 3)
    if un == ("E", "E"):
        return 6 if proj else (4 if op == "max" else NOT_MINIMAL)
    if un == ("N", "N"):
        return 7 if proj else (5 if op == "min" else NOT_MINIMAL)
    if (op, un) in (("p2", ("E", "id")), ("p1", ("id", "E"))):
        return 8
    if (op, un) in (("p2", ("N", "id")), ("p1", ("id", "N"))):
        return 9
    return NOT_MINIMAL


# one representative per class; order p1 increasing throughout
MINIMAL_REPRESENTATIVES = {
    1: BinaryType("p1", "p1", "id", "id"),
    2: BinaryType("max", "max", "id", "id"),
    3: BinaryType("min", "min", "id", "id"),
    4: BinaryType("max", "max", "E", "E"),
    5: BinaryType("min", "min", "N", "N"),
    6: BinaryType("p1", "p1", "E", "E"),
    7: BinaryType("p1", "p1", "N", "N"),
    8: BinaryType("p1", "p1", "id", "E"),
    9: BinaryType("p1", "p1", "id", "N"),
}


# terms

@dataclass(frozen=True)
class Var:
    name: str  # "u" or "v"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Alpha:
    arg: "Term"

    def __str__(self):
        return f"(alpha {self.arg})"


@dataclass(frozen=True)
class App:
    sym: str
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.sym} {self.left} {self.right})"


Term = Union[Var, Alpha, App]
U, V = Var("u"), Var("v")


def _tokens(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_term(text: str) -> Term:
    """Parse terms such as ``(f (f u v) (f u (alpha v)))``."""
    toks = _tokens(text)
    pos = 0

    def take() -> Term:
        nonlocal pos
        if pos >= len(toks):
            raise TermError(f"unexpected end of term {text!r}")
        tok = toks[pos]
        pos += 1
        if tok == ")":
            raise TermError(f"unexpected ')' in {text!r}")
        if tok != "(":
            if tok in ("u", "v"):
                return Var(tok)
            raise TermError(f"unknown variable {tok!r}; terms use u and v")
        if pos >= len(toks):
            raise TermError(f"unexpected end of term {text!r}")
        head = toks[pos]
        pos += 1
        args = []
        while pos < len(toks) and toks[pos] != ")":
            args.append(take())
        if pos >= len(toks):
            raise TermError(f"missing ')' in {text!r}")
        pos += 1
        if head == "alpha":
            if len(args) != 1:
                raise TermError("alpha takes one argument")
            return Alpha(args[0])
        if head in ("(", ")", "u", "v"):
            raise TermError(f"bad head {head!r} in {text!r}")
        if len(args) != 2:
            raise TermError(f"symbol {head} takes two arguments, got {len(args)}")
        return App(head, args[0], args[1])

    t = take()
    if pos != len(toks):
        raise TermError(f"trailing tokens in {text!r}")
    return t


def term_symbols(t: Term) -> set[str]:
    if isinstance(t, Var):
        return set()
    if isinstance(t, Alpha):
        return term_symbols(t.arg)
    return {t.sym} | term_symbols(t.left) | term_symbols(t.right)


# pair types: None for equal, otherwise (edge?, increasing?)
EQ = None
PAIR_TYPES = (EQ, (True, True), (True, False), (False, True), (False, False))
_INPUTS = tuple(product(PAIR_TYPES, PAIR_TYPES))


def symbol_map(t: BinaryType) -> dict:
    """The pair-type map of a canonical binary injection of type t."""
    if not t.canonical:
        raise TermError(f"symbol type {t.short()} is not canonical")
    out = {}
    for c1, c2 in _INPUTS:
        if c1 is EQ and c2 is EQ:
            out[(c1, c2)] = EQ
            continue
        if c1 is EQ:
            rel = apply_un(t.eq_neq, c2[0])
            up = c2[1]
        elif c2 is EQ:
            rel = apply_un(t.neq_eq, c1[0])
            up = c1[1]
        else:
            op = t.straight if c1[1] == c2[1] else t.twisted
            rel = apply_bin(op, c1[0], c2[0])
            up = c1[1] if t.order == "p1" else c2[1]
        out[(c1, c2)] = (rel, up == t.increasing)
    return out


def term_map(t: Term, env: Mapping[str, BinaryType]) -> dict:
    """Pair-type map computed by the term from the symbol types in env."""
    missing = sorted(term_symbols(t) - set(env))
    if missing:
        raise TermError(f"symbols without a type: {missing}")
    maps = {s: symbol_map(env[s]) for s in term_symbols(t)}

    def go(node: Term) -> dict:
        if isinstance(node, Var):
            i = 0 if node.name == "u" else 1
            return {k: k[i] for k in _INPUTS}
        if isinstance(node, Alpha):
            inner = go(node.arg)
            return {k: (c if c is EQ else (c[0], not c[1])) for k, c in inner.items()}
        left, right = go(node.left), go(node.right)
        m = maps[node.sym]
        return {k: m[(left[k], right[k])] for k in _INPUTS}

    return go(t)


def type_from_map(m: Mapping) -> BinaryType | None:
    """Binary type of an injective pair-type map, None if the map collapses pairs."""
    if any(m[k] is EQ for k in _INPUTS if k != (EQ, EQ)):
        return None
    rels = (True, False)

    def sym(pairs_by_key, matcher):
        table = {}
        for key, inputs in pairs_by_key.items():
            table[key] = {m[i][0] for i in inputs}
        return matcher(table)

    straight = {
        (r1, r2): [((r1, d), (r2, d)) for d in rels] for r1 in rels for r2 in rels
    }
    twisted = {
        (r1, r2): [((r1, d), (r2, not d)) for d in rels] for r1 in rels for r2 in rels
    }
    neq_eq = {r: [((r, d), EQ) for d in rels] for r in rels}
    eq_neq = {r: [(EQ, (r, d)) for d in rels] for r in rels}
    hyp = {("p1", True), ("p1", False), ("p2", True), ("p2", False)}
    for c1, c2 in _INPUTS:
        if c1 is EQ or c2 is EQ:
            continue
        up = m[(c1, c2)][1]
        hyp -= {h for h in hyp if (c1[1] if h[0] == "p1" else c2[1]) == (up != h[1])}
    if len(hyp) == 1:
        ((ord_, inc),) = hyp
    else:
        ord_, inc = NONCANON, True
    return BinaryType(
        sym(straight, _match_bin),
        sym(twisted, _match_bin),
        sym(neq_eq, _match_un),
        sym(eq_neq, _match_un),
        ord_,
        inc,
    )


def compose_types(term: Term | str, env: Mapping[str, BinaryType]) -> BinaryType:
    """Predicted type of a term over typed binary symbols, u, v and alpha."""
    if isinstance(term, str):
        term = parse_term(term)
    t = type_from_map(term_map(term, env))
    if t is None:
        raise TermError(f"term {term} is not injective")
    return t


def reachable_types(start: BinaryType, rounds: int = 4, sym: str = "f") -> dict[tuple, BinaryType | None]:
    """All pair-type maps of terms in f, u, v and alpha, closed under ``rounds``
    rounds of substitution.  Returns map -> type (None if not injective)."""
    fmap = symbol_map(start)
    keyed = lambda m: tuple(m[k] for k in _INPUTS)  # noqa: E731
    proj_u = {k: k[0] for k in _INPUTS}
    proj_v = {k: k[1] for k in _INPUTS}
    found = {keyed(proj_u): proj_u, keyed(proj_v): proj_v}

    def add(m):
        k = keyed(m)
        if k not in found:
            found[k] = m
            return True
        return False

    for _ in range(rounds):
        current = list(found.values())
        changed = False
        for m in current:
            changed |= add({k: (c if c is EQ else (c[0], not c[1])) for k, c in m.items()})
        for a in current:
            for b in current:
                changed |= add({k: fmap[(a[k], b[k])] for k in _INPUTS})
        if not changed:
            break
    return {k: type_from_map(m) for k, m in found.items()}


def closure_stays_in_class(start: BinaryType, rounds: int = 4) -> tuple[bool, list[BinaryType]]:
    """Whether every injective type reachable from start has start's class.

    Returns the verdict and the list of offending types.
    """
    cls = minimality_class(start)
    bad = []
    for t in reachable_types(start, rounds).values():
        if t is None:
            continue
        if not t.canonical or minimality_class(t) != cls:
            bad.append(t)
    return not bad, bad


# concrete realization of terms

def realize_term(
    term: Term | str,
    env: Mapping[str, BinaryType],
    A: Iterable[Nat],
    B: Iterable[Nat],
) -> FunctionSample:
    """Evaluate a term on A x B with a fresh greedy sample per symbol occurrence.

    Each occurrence of a binary symbol gets its own injection of the symbol's
    type, built only on the argument pairs that occurrence actually sees.
    Each occurrence of alpha is an order-reversing adjacency-preserving map
    on the values it receives.
    """
    if isinstance(term, str):
        term = parse_term(term)
    grid = list(product(sorted(set(A)), sorted(set(B))))

    def go(node: Term) -> dict:
        if isinstance(node, Var):
            i = 0 if node.name == "u" else 1
            return {p: p[i] for p in grid}
        if isinstance(node, Alpha):
            inner = go(node.arg)
            rev = make_reversal(set(inner.values()))
            return {p: rev(x) for p, x in inner.items()}
        if node.sym not in env:
            raise TermError(f"symbol {node.sym!r} has no type")
        left, right = go(node.left), go(node.right)
        pts = {(left[p], right[p]) for p in grid}
        f = make_binary_injection(env[node.sym], (), (), points=pts)
        return {p: f(left[p], right[p]) for p in grid}

    return FunctionSample(2, go(term))
