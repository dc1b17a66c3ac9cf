"""Searching for compositions of generators and automorphisms that match a target.

A term is built from variables, generator applications and automorphism
moves.  Moves are finite partial isomorphisms, which is all that is ever
needed: by homogeneity each one extends to an automorphism of the graph.

The search works on *states*: the tuple of values a term takes on the
target's domain.  Two states that differ by a partial isomorphism behave the
same under every later step (moves are applied before each generator), so
states are deduplicated by their isomorphism type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence, Union

from .behavior import is_canonical_partitioned
from .btypes import BinaryType
from .core import FiniteGraph, PartialIso, RadoError, bit_adjacent, extend_iso, find_witness, induced_subgraph
from .naturals import Nat, NatCodec
from .operations import FunctionSample, compose
from .ramsey import find_canonical_copy, profile_parts


class SearchInconclusive(RadoError):
    """The depth cap was reached before the search space was exhausted."""


class StructurallyImpossible(RadoError):
    """No term over these generators can match the target."""


# terms

@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Move:
    iso: PartialIso
    arg: "Term"


@dataclass(frozen=True)
class Gen:
    index: int
    args: tuple


Term = Union[Var, Move, Gen]

_VAR_NAMES = "xyzw"


def _var_name(i: int, arity: int) -> str:
    return _VAR_NAMES[i] if arity <= len(_VAR_NAMES) else f"x{i}"


def term_depth(t: Term) -> int:
    if isinstance(t, Var):
        return 0
    if isinstance(t, Move):
        return term_depth(t.arg)
    return 1 + max((term_depth(a) for a in t.args), default=0)


def term_moves(t: Term) -> list[PartialIso]:
    """Moves in the order they appear when the term is printed."""
    if isinstance(t, Var):
        return []
    if isinstance(t, Move):
        return [t.iso] + term_moves(t.arg)
    out: list[PartialIso] = []
    for a in t.args:
        out += term_moves(a)
    return out


def format_term(t: Term, arity: int = 1) -> str:
    counter = iter(range(10**9))

    def go(node: Term) -> str:
        if isinstance(node, Var):
            return _var_name(node.index, arity)
        if isinstance(node, Move):
            return f"(aut {next(counter)} {go(node.arg)})"
        return "(" + " ".join([f"g{node.index}"] + [go(a) for a in node.args]) + ")"

    return go(t)


def evaluate(t: Term, generators: Sequence[FunctionSample], point: tuple) -> Nat:
    if isinstance(t, Var):
        return point[t.index]
    if isinstance(t, Move):
        return t.iso(evaluate(t.arg, generators, point))
    return generators[t.index](*(evaluate(a, generators, point) for a in t.args))


# moves

def _embeddings(values: Sequence[Nat], coords: Sequence[Nat], monotone: bool = False):
    """Induced embeddings of the graph on ``values`` into ``coords``, lex order."""
    k = len(values)
    adj = [[bit_adjacent(values[i], values[j]) for j in range(k)] for i in range(k)]
    order = sorted(range(k), key=lambda i: values[i])
    rank = {i: r for r, i in enumerate(order)}
    img: list[Nat] = []
    used: set = set()

    def go(i: int):
        if i == k:
            yield tuple(img)
            return
        for c in coords:
            if c in used:
                continue
            if any(bit_adjacent(c, img[j]) != adj[i][j] for j in range(i)):
                continue
            if monotone and any((rank[j] < rank[i]) != (img[j] < c) for j in range(i)):
                continue
            img.append(c)
            used.add(c)
            yield from go(i + 1)
            used.discard(c)
            img.pop()

    yield from go(0)


def automorphism_move(sample_points: Iterable[Nat], target_points: Iterable[Nat]) -> PartialIso | None:
    """Partial isomorphism moving sample_points into (or over) target_points.

    If there are no more sample points than target points, the result is the
    lex-first induced embedding of the sample graph into the target set.
    Otherwise it is the lex-first partial isomorphism whose image covers the
    target set, extended to the remaining sample points by forth steps.
    Returns None when no such move exists.
    """
    S = sorted(set(sample_points))
    T = sorted(set(target_points))
    if len(S) <= len(T):
        for img in _embeddings(S, T):
            return PartialIso(dict(zip(S, img)))
        return None
    # choose which sample points land on T, in order
    chosen: dict = {}

    def go(i: int, used: set):
        if len(chosen) == len(T):
            return True
        if len(S) - i < len(T) - len(chosen):
            return False
        s = S[i]
        for t in T:
            if t in used:
                continue
            if all(bit_adjacent(s, u) == bit_adjacent(t, chosen[u]) for u in chosen):
                chosen[s] = t
                if go(i + 1, used | {t}):
                    return True
                del chosen[s]
        return go(i + 1, used)

    if not go(0, set()):
        return None
    p = PartialIso(dict(chosen))
    for s in S:
        if s not in p.pairs:
            p = extend_iso(p, s)
    return p


# search

def _kernel(values: Sequence) -> tuple:
    label: dict = {}
    return tuple(label.setdefault(v, len(label)) for v in values)


def state_key(values: Sequence[Nat], ordered: bool = False) -> tuple:
    """Isomorphism type of a value tuple: kernel, adjacency of classes, optionally order."""
    reps: list[Nat] = []
    label: dict = {}
    kernel = []
    for v in values:
        if v not in label:
            label[v] = len(reps)
            reps.append(v)
        kernel.append(label[v])
    adj = tuple(bit_adjacent(a, b) for a, b in combinations(reps, 2))
    key = (tuple(kernel), adj)
    if ordered:
        key += (tuple(sorted(range(len(reps)), key=lambda i: reps[i])),)
    return key


@dataclass
class Derivation:
    term: Term
    final: PartialIso
    arity: int
    depth: int
    states_explored: int = 0

    def __str__(self):
        return format_term(self.term, self.arity)

    def to_json(self, codec: NatCodec | None = None) -> dict:
        own = codec is None
        codec = codec or NatCodec()
        out = {
            "term": format_term(self.term, self.arity),
            "arity": self.arity,
            "depth": self.depth,
            "moves": [m.to_json(codec)["pairs"] for m in term_moves(self.term)],
            "final": self.final.to_json(codec)["pairs"],
            "states_explored": self.states_explored,
        }
        return codec.wrap(out) if own else out

    @classmethod
    def from_json(cls, data: Mapping) -> Derivation:
        decode = NatCodec.decoder(data.get("naturals"))
        moves = [PartialIso({decode(a): decode(b) for a, b in m}) for m in data["moves"]]
        arity = data.get("arity", 1)
        term = parse_term(data["term"], moves, arity)
        final = PartialIso({decode(a): decode(b) for a, b in data["final"]})
        return cls(term, final, arity, term_depth(term), data.get("states_explored", 0))


def parse_term(text: str, moves: Sequence[PartialIso], arity: int = 1) -> Term:
    """Inverse of format_term; ``(aut k t)`` refers to moves[k]."""
    toks = text.replace("(", " ( ").replace(")", " ) ").split()
    names = {_var_name(i, arity): i for i in range(arity)}
    pos = 0

    def take() -> Term:
        nonlocal pos
        if pos >= len(toks):
            raise RadoError(f"unexpected end of term {text!r}")
        tok = toks[pos]
        pos += 1
        if tok in names:
            return Var(names[tok])
        if tok != "(":
            raise RadoError(f"unexpected token {tok!r} in {text!r}")
        head = toks[pos]
        pos += 1
        if head == "aut":
            k = int(toks[pos])
            pos += 1
            if not 0 <= k < len(moves):
                raise RadoError(f"no move {k}")
            node: Term = Move(moves[k], take())
        elif head.startswith("g") and head[1:].isdigit():
            args = []
            while pos < len(toks) and toks[pos] != ")":
                args.append(take())
            node = Gen(int(head[1:]), tuple(args))
        else:
            raise RadoError(f"unknown head {head!r} in {text!r}")
        if pos >= len(toks) or toks[pos] != ")":
            raise RadoError(f"missing ')' in {text!r}")
        pos += 1
        return node

    term = take()
    if pos != len(toks):
        raise RadoError(f"trailing input in {text!r}")
    return term


@dataclass
class InterpolationGoal:
    target: FunctionSample
    depth_cap: int = 6
    region_bound: int | None = None


def _coordinate_sets(g: FunctionSample) -> list[list[Nat]]:
    return [g.coordinates(i) for i in range(g.arity)]


def _closed_grid(g: FunctionSample) -> bool:
    coords = _coordinate_sets(g)
    size = 1
    for c in coords:
        size *= len(c)
    return size == len(g)


def interpolate_search(
    generators: Sequence[FunctionSample],
    goal: InterpolationGoal,
    move_kind: str = "any",
    max_embeddings: int | None = None,
) -> Derivation | None:
    """Breadth-first search over terms in the generators, up to goal.depth_cap.

    Returns the first derivation found, None when every reachable state has
    been seen (the target is not reachable with these samples), and raises
    SearchInconclusive when the cap stops a search that could continue.
    """
    if move_kind not in ("any", "monotone"):
        raise RadoError("move_kind must be 'any' or 'monotone'")
    ordered = move_kind == "monotone"
    target = goal.target
    domain = sorted(target.entries)
    arity = target.arity
    tvals = [target.entries[d] for d in domain]
    tkey = state_key(tvals, ordered)
    for g in generators:
        if not _closed_grid(g):
            raise RadoError("generator samples must be defined on a full product grid")
    coords = [_coordinate_sets(g) for g in generators]
    if goal.region_bound is not None:
        coords = [[[c for c in cs if c <= goal.region_bound] for cs in gc] for gc in coords]

    # with only injective generators every term's kernel is an intersection of variable kernels
    if all(g.injective for g in generators):
        reachable = set()
        for r in range(1, arity + 1):
            for idxs in combinations(range(arity), r):
                reachable.add(_kernel([tuple(d[i] for i in idxs) for d in domain]))
        if tkey[0] not in reachable:
            raise StructurallyImpossible("target identifies points that every term keeps apart")

    seen: dict[tuple, tuple[Term, tuple]] = {}
    frontier: list[tuple[Term, tuple]] = []
    for i in range(arity):
        vals = tuple(d[i] for d in domain)
        key = state_key(vals, ordered)
        if key not in seen:
            seen[key] = (Var(i), vals)
            frontier.append(seen[key])
    explored = 0

    def moves_for(vals: tuple, cs: Sequence[Nat]):
        reps = list(dict.fromkeys(vals))
        count = 0
        for img in _embeddings(reps, cs, ordered):
            yield PartialIso(dict(zip(reps, img)))
            count += 1
            if max_embeddings is not None and count >= max_embeddings:
                return

    for depth in range(1, goal.depth_cap + 1):
        new_frontier: list[tuple[Term, tuple]] = []
        pool = list(seen.values())
        frontier_ids = {id(s) for s in frontier}
        for gi, g in enumerate(generators):
            for args in product(pool, repeat=g.arity):
                if not any(id(a) in frontier_ids for a in args):
                    continue
                move_lists = [list(moves_for(a[1], coords[gi][j])) for j, a in enumerate(args)]
                for isos in product(*move_lists):
                    explored += 1
                    vals = tuple(
                        g(*(isos[j](args[j][1][p]) for j in range(g.arity))) for p in range(len(domain))
                    )
                    key = state_key(vals, ordered)
                    term = Gen(gi, tuple(Move(isos[j], args[j][0]) for j in range(g.arity)))
                    if key == tkey:
                        final = PartialIso(dict(zip(vals, tvals)))
                        return Derivation(term, final, arity, depth, explored)
                    if key not in seen:
                        entry = (term, vals)
                        seen[key] = entry
                        new_frontier.append(entry)
        if not new_frontier:
            return None
        frontier = new_frontier
    raise SearchInconclusive(f"depth cap {goal.depth_cap} reached after {explored} states")


def check_derivation(d: Derivation, generators: Sequence[FunctionSample], target: FunctionSample) -> bool:
    """Re-evaluate a derivation from scratch against the target."""
    for point, want in target.entries.items():
        if d.final(evaluate(d.term, generators, point)) != want:
            return False
    return True


# hand-built generators

def collapsing_generator(region: Iterable[Nat]) -> FunctionSample:
    """Identity on region except 1 -> 0: collapses the edge {0,1} and,
    since 5 ~ 0 but 5 !~ 1, turns the non-edge {1,5} into an edge."""
    return FunctionSample(1, {(x,): (0 if x == 1 else x) for x in sorted(set(region))})


def edge_deleting_generator(region: Iterable[Nat]) -> FunctionSample:
    """Identity on region except 1 -> w, where w copies 1's neighbourhood
    in region but is not adjacent to 0.  Injective; removes exactly {0,1}."""
    R = sorted(set(region))
    if 0 not in R or 1 not in R:
        raise RadoError("region must contain 0 and 1")
    rest = [x for x in R if x not in (0, 1)]
    U = [x for x in rest if bit_adjacent(x, 1)]
    W = [0] + [x for x in rest if not bit_adjacent(x, 1)]
    w = find_witness(U, W)
    return FunctionSample(1, {(x,): (w if x == 1 else x) for x in R})


def delete_one_edge(e: FunctionSample, g: FiniteGraph, edge: tuple, constants: tuple = (0, 1)) -> FunctionSample:
    """Move g so that ``edge`` sits on e's constants, then apply e.

    e must be canonical on that copy with respect to the profile partition,
    act as the identity on and between the proper parts and the constants,
    and delete the edge between the constants.  The returned sample is
    defined on g's vertices.
    """
    a, b = edge
    if not g.edges():
        raise RadoError("graph has no edge to delete")
    if not g.adjacent(a, b):
        raise RadoError(f"{edge} is not an edge of the graph")
    region = [x for (x,) in e.entries]
    emb = find_canonical_copy(e, g, region, {a: constants[0], b: constants[1]})
    if emb is None:
        raise RadoError("no canonical copy of the graph with the edge on the constants in e's region")
    parts = profile_parts(g, [a, b])
    image_parts = [[emb[v] for v in p] for p in parts]
    behavior = is_canonical_partitioned(e, induced_subgraph(emb.values()), image_parts)
    for name, row in behavior.table.items():
        if name == "0-1":
            if row["E"] != "N":
                raise RadoError(f"e does not delete the edge between the constants: {row}")
            continue
        if row["E"] not in (None, "E") or row["N"] not in (None, "N"):
            raise RadoError(f"e does not act as the identity on {name}: {row}")
    return FunctionSample(1, {(v,): e(emb[v]) for v in g.vertices})


def delete_all_edges(e: FunctionSample, g: FiniteGraph) -> tuple[FunctionSample, list[FiniteGraph]]:
    """Repeat delete_one_edge until no edge is left.

    Returns the composed sample on g's vertices and the graphs passed through.
    """
    total = FunctionSample(1, {(v,): v for v in g.vertices})
    history = [g]
    current = g
    while current.edges():
        step = delete_one_edge(e, current, current.edges()[0])
        total = compose(step, total)
        current = induced_subgraph(step.image())
        history.append(current)
    return total, history


@dataclass
class StabilityReport:
    start: BinaryType
    checked: int = 0
    mismatches: list = field(default_factory=list)
    outside: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.outside


def type_stability_check(start: BinaryType, depth: int = 2, side: int = 5) -> StabilityReport:
    """Realize every term of the given depth over one symbol, u, v and alpha,
    classify it, and compare with the algebra.

    Mismatches are terms whose realized type differs from the prediction;
    "outside" lists realized types the algebra does not reach from start.
    """
    from .behavior import App, Alpha, U, V, classify_binary, compose_types, realize_term, reachable_types

    env = {"f": start}
    predicted = {t for t in reachable_types(start, rounds=depth + 1).values() if t is not None}
    atoms = [U, V, Alpha(U), Alpha(V)]
    terms = list(atoms)
    for _ in range(depth):
        terms = terms + [App("f", a, b) for a in terms for b in terms if isinstance(a, App) or isinstance(b, App) or (a in atoms and b in atoms)]
        terms = list(dict.fromkeys(terms))
    report = StabilityReport(start)
    grid = range(side)
    for t in terms:
        if not isinstance(t, App):
            continue
        try:
            want = compose_types(t, env)
        except RadoError:
            continue
        got = classify_binary(realize_term(t, env, grid, grid))
        report.checked += 1
        if got != want:
            report.mismatches.append((str(t), want, got))
        if got not in predicted:
            report.outside.append((str(t), got))
    return report
