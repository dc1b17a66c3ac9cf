"""Relations over E, N and =, preservation by samples, and square homomorphisms.

Relation text uses prefix syntax over variable indices::

    (and (E 0 1) (not (= 1 2)))
    (exists 1 (and (E 0 2) (N 1 2)))

``(exists k body)`` binds k fresh variables numbered after all variables in
scope.  Atoms are ``E``, ``N`` and ``=``; connectives ``and``, ``or``,
``not``, ``xor``; constants ``true`` and ``false``.  N(x, y) means x and y
are distinct and not adjacent.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

import numpy as np

from .core import RadoError, bit_adjacent, find_witness
from .naturals import Nat
from .operations import FunctionSample


class WitnessNotFound(RadoError):
    """No existential witness within the search bound, and exact decision was not requested."""


class RelationSyntaxError(RadoError):
    pass


# formula nodes are tuples: ("E", i, j), ("N", i, j), ("=", i, j), ("true",),
# ("false",), ("not", a), ("and", a, b, ...), ("or", ...), ("xor", ...),
# ("exists", k, body)

_CONNECTIVES = {"and", "or", "xor"}


def _tokens(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_formula(text: str):
    toks = _tokens(text)
    pos = 0

    def need():
        if pos >= len(toks):
            raise RelationSyntaxError(f"unexpected end of formula {text!r}")

    def take():
        nonlocal pos
        need()
        tok = toks[pos]
        pos += 1
        if tok in ("true", "false"):
            return (tok,)
        if tok != "(":
            raise RelationSyntaxError(f"unexpected token {tok!r} in {text!r}")
        need()
        head = toks[pos]
        pos += 1
        if head in ("E", "N", "="):
            args = []
            while pos < len(toks) and toks[pos] != ")":
                args.append(_index(toks[pos], text))
                pos += 1
            if len(args) != 2:
                raise RelationSyntaxError(f"atom {head} takes two variables in {text!r}")
            out = (head, args[0], args[1])
        elif head == "not":
            out = ("not", take())
        elif head in _CONNECTIVES:
            args = []
            while pos < len(toks) and toks[pos] != ")":
                args.append(take())
            if not args:
                raise RelationSyntaxError(f"{head} needs arguments in {text!r}")
            out = (head, *args)
        elif head == "exists":
            need()
            k = _index(toks[pos], text)
            pos += 1
            out = ("exists", k, take())
        else:
            raise RelationSyntaxError(f"unknown head {head!r} in {text!r}")
        need()
        if toks[pos] != ")":
            raise RelationSyntaxError(f"expected ')' in {text!r}")
        pos += 1
        return out

    node = take()
    if pos != len(toks):
        raise RelationSyntaxError(f"trailing tokens in {text!r}")
    return node


def _index(tok: str, text: str) -> int:
    if not tok.isdigit():
        raise RelationSyntaxError(f"expected a variable index, got {tok!r} in {text!r}")
    return int(tok)


def format_formula(node) -> str:
    head = node[0]
    if head in ("true", "false"):
        return head
    if head in ("E", "N", "="):
        return f"({head} {node[1]} {node[2]})"
    if head == "exists":
        return f"(exists {node[1]} {format_formula(node[2])})"
    return "(" + " ".join([head] + [format_formula(a) for a in node[1:]]) + ")"


def _check_scope(node, scope: int):
    head = node[0]
    if head in ("E", "N", "="):
        for i in node[1:]:
            if i >= scope:
                raise RelationSyntaxError(f"variable {i} is not in scope (scope size {scope})")
    elif head == "exists":
        _check_scope(node[2], scope + node[1])
    elif head not in ("true", "false"):
        for a in node[1:]:
            _check_scope(a, scope)


def _infer_arity(node, bound_here: int = 0) -> int:
    """Smallest arity under which every atom index is in scope."""
    head = node[0]
    if head in ("E", "N", "="):
        return max(node[1], node[2]) + 1 - bound_here
    if head == "exists":
        return _infer_arity(node[2], bound_here + node[1])
    if head in ("true", "false"):
        return 0
    return max(_infer_arity(a, bound_here) for a in node[1:])


def _has_exists(node) -> bool:
    if node[0] == "exists":
        return True
    if node[0] in ("not",) or node[0] in _CONNECTIVES:
        return any(_has_exists(a) for a in node[1:])
    return False


def _holds_qf(node, env: Sequence[Nat]) -> bool:
    head = node[0]
    if head == "E":
        return bit_adjacent(env[node[1]], env[node[2]])
    if head == "N":
        x, y = env[node[1]], env[node[2]]
        return x != y and not bit_adjacent(x, y)
    if head == "=":
        return env[node[1]] == env[node[2]]
    if head == "true":
        return True
    if head == "false":
        return False
    if head == "not":
        return not _holds_qf(node[1], env)
    if head == "and":
        return all(_holds_qf(a, env) for a in node[1:])
    if head == "or":
        return any(_holds_qf(a, env) for a in node[1:])
    if head == "xor":
        return sum(_holds_qf(a, env) for a in node[1:]) % 2 == 1
    raise RadoError(f"quantifier inside a quantifier-free evaluation: {head}")


@dataclass
class EvalResult:
    value: bool
    witness: tuple | None = None
    method: str = "direct"

    def to_json(self) -> dict:
        out = {"value": self.value, "method": self.method}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _extension_types(base: Sequence[Nat], k: int):
    """Candidate witness tuples covering every type of k elements over base.

    Each new element either equals an element already present or is fresh
    with some adjacency pattern to everything present.  Fresh elements are
    realized by least witnesses, which is exact in the random graph.
    """
    def go(present: list[Nat], chosen: list[Nat]):
        if len(chosen) == k:
            yield tuple(chosen)
            return
        distinct = sorted(set(present))
        for x in distinct:
            yield from go(present, chosen + [x])
        for mask in range(1 << len(distinct)):
            U = [x for b, x in enumerate(distinct) if mask >> b & 1]
            W = [x for b, x in enumerate(distinct) if not mask >> b & 1]
            z = find_witness(U, W)
            yield from go(present + [z], chosen + [z])

    yield from go(list(base), [])


def _holds(node, env: list, bound: int, constructive: bool, found: list) -> bool:
    head = node[0]
    if head == "exists":
        k, body = node[1], node[2]
        for zs in product(range(bound + 1), repeat=k):
            if _holds(body, env + list(zs), bound, constructive, found):
                found.append(("bounded", zs))
                return True
        if not constructive:
            raise WitnessNotFound(f"no witness in 0..{bound} for {format_formula(node)} at {tuple(env)}")
        for zs in _extension_types(env, k):
            if _holds(body, env + list(zs), bound, constructive, found):
                found.append(("extension", zs))
                return True
        return False
    if head == "not":
        return not _holds(node[1], env, bound, constructive, found)
    if head in _CONNECTIVES:
        vals = [_holds(a, env, bound, constructive, found) for a in node[1:]]
        if head == "and":
            return all(vals)
        if head == "or":
            return any(vals)
        return sum(vals) % 2 == 1
    return _holds_qf(node, env)


class Relation:
    """A relation given by a formula over E, N, = with variables 0..arity-1."""

    def __init__(self, arity: int, formula, name: str | None = None):
        if isinstance(formula, str):
            formula = parse_formula(formula)
        if arity < 1:
            raise RadoError("arity must be positive")
        _check_scope(formula, arity)
        self.arity = arity
        self.formula = formula
        self.name = name or format_formula(formula)
        self.quantified = _has_exists(formula)

    def __repr__(self):
        return f"Relation({self.arity}, {self.name!r})"

    def holds(self, t: Sequence[Nat], bound: int = 64, constructive: bool = True) -> bool:
        return self.evaluate(t, bound, constructive).value

    def evaluate(self, t: Sequence[Nat], bound: int = 64, constructive: bool = True) -> EvalResult:
        if len(t) != self.arity:
            raise RadoError(f"{self.name} has arity {self.arity}, got a {len(t)}-tuple")
        if not self.quantified:
            return EvalResult(_holds_qf(self.formula, list(t)))
        found: list = []
        value = _holds(self.formula, list(t), bound, constructive, found)
        if value and found:
            method, zs = found[-1]
            return EvalResult(True, tuple(zs), method)
        return EvalResult(value, None, "extension" if constructive else "bounded")

    @classmethod
    def parity(cls, k: int) -> Relation:
        """R^(k) as a formula: pairwise distinct and an odd number of edges."""
        if k < 2:
            raise RadoError("parity relations need arity at least 2")
        pairs = list(combinations(range(k), 2))
        distinct = [("not", ("=", i, j)) for i, j in pairs]
        odd = ("xor", *[("E", i, j) for i, j in pairs])
        return cls(k, ("and", *distinct, odd), name=f"R{k}")


class ParityRelation:
    """R^(k) by direct edge counting."""

    def __init__(self, k: int):
        if k < 2:
            raise RadoError("parity relations need arity at least 2")
        self.arity = k
        self.name = f"R{k}"

    def __repr__(self):
        return f"ParityRelation({self.arity})"

    def holds(self, t: Sequence[Nat], bound: int = 64, constructive: bool = True) -> bool:
        if len(t) != self.arity:
            raise RadoError(f"{self.name} has arity {self.arity}, got a {len(t)}-tuple")
        if len(set(t)) != len(t):
            return False
        return sum(bit_adjacent(a, b) for a, b in combinations(t, 2)) % 2 == 1

    def evaluate(self, t, bound: int = 64, constructive: bool = True) -> EvalResult:
        return EvalResult(self.holds(t))


def eval_relation(R, t: Sequence[Nat], bound: int = 64, constructive: bool = True) -> bool:
    return R.holds(t, bound, constructive)


EDGE = Relation(2, "(E 0 1)", name="E")
NON_EDGE = Relation(2, "(N 0 1)", name="N")
NEQ = Relation(2, "(not (= 0 1))", name="neq")
NEQ_PP = Relation(2, "(exists 1 (and (E 0 2) (N 1 2)))", name="neq-pp")

PRESETS = {
    "E": EDGE,
    "N": NON_EDGE,
    "neq": NEQ,
    "neq-pp": NEQ_PP,
    "R3": ParityRelation(3),
    "R4": ParityRelation(4),
    "R5": ParityRelation(5),
}


def relation_from_text(text: str, arity: int | None = None):
    """A preset name, ``R<k>``, or a formula (arity inferred from free variables if not given)."""
    if text in PRESETS:
        return PRESETS[text]
    if text.startswith("R") and text[1:].isdigit():
        return ParityRelation(int(text[1:]))
    node = parse_formula(text)
    if arity is None:
        arity = _infer_arity(node)
        if arity < 1:
            raise RadoError(f"cannot infer arity of {text!r}; pass it explicitly")
    return Relation(arity, node)


@dataclass
class Preservation:
    preserved: bool
    selection: tuple | None = None
    image: tuple | None = None
    checked: int = 0

    def to_json(self) -> dict:
        out = {"preserved": self.preserved, "checked": self.checked}
        if not self.preserved:
            out["counterexample"] = {"tuples": [list(t) for t in self.selection], "image": list(self.image)}
        return out


def all_tuples(values: Iterable[Nat], arity: int) -> list[tuple]:
    return list(product(sorted(set(values)), repeat=arity))


def preserves(
    f: FunctionSample,
    R,
    test_tuples: Iterable[tuple],
    bound: int = 64,
) -> Preservation:
    """Check f(r_1, ..., r_n) in R for every selection of R-tuples from test_tuples.

    Selections are taken in lexicographic order of tuple indices; the first
    violation is reported.
    """
    members = [tuple(t) for t in test_tuples if R.holds(t, bound)]
    checked = 0
    for sel in product(members, repeat=f.arity):
        image = tuple(f(*(r[i] for r in sel)) for i in range(R.arity))
        checked += 1
        if not R.holds(image, bound):
            return Preservation(False, sel, image, checked)
    return Preservation(True, None, None, checked)


def _diseq_mask(t: Sequence) -> int:
    mask = 0
    for b, (i, j) in enumerate(combinations(range(len(t)), 2)):
        if t[i] != t[j]:
            mask |= 1 << b
    return mask


@dataclass
class IntersectionResult:
    closed: bool
    pair: tuple | None = None

    def to_json(self) -> dict:
        out = {"intersection_closed": self.closed}
        if self.pair is not None:
            out["counterexample"] = [list(t) for t in self.pair]
        return out


def intersection_closed_check(R: Iterable[Sequence]) -> IntersectionResult:
    """For every u, v in R, look for w in R that is unequal wherever u or v is."""
    tuples = [tuple(t) for t in R]
    if len({len(t) for t in tuples}) > 1:
        raise RadoError("tuples of different lengths")
    masks = [_diseq_mask(t) for t in tuples]
    available = set(masks)
    for i, j in combinations(range(len(tuples)), 2):
        need = masks[i] | masks[j]
        if need in (masks[i], masks[j]):
            continue
        if not any(m & need == need for m in available):
            return IntersectionResult(False, (tuples[i], tuples[j]))
    return IntersectionResult(True)


@dataclass
class SquareHomResult:
    mapping: dict | None
    nodes: int
    constraints: int
    reason: str | None = None

    def to_json(self) -> dict:
        out = {
            "found": self.mapping is not None,
            "nodes_explored": self.nodes,
            "constraints": self.constraints,
        }
        if self.mapping is not None:
            out["mapping"] = [[list(p), v] for p, v in sorted(self.mapping.items())]
        if self.reason:
            out["reason"] = self.reason
        return out


def square_constraints(elements: Sequence[Nat], relations: Sequence, bound: int = 64):
    """Point tuples of the grid on which each relation holds in both projections."""
    points = list(product(elements, elements))
    out = []
    for R in relations:
        for idx in product(range(len(points)), repeat=R.arity):
            first = tuple(points[i][0] for i in idx)
            second = tuple(points[i][1] for i in idx)
            if R.holds(first, bound) and R.holds(second, bound):
                out.append((R, idx))
    return points, out


def _satisfiable_injectively(R, pattern: Sequence[int], bound: int) -> bool:
    """Can R hold on a tuple whose equal positions are exactly those of pattern?"""
    labels = sorted(set(pattern))
    m = len(labels)
    pairs = list(combinations(range(m), 2))
    for mask in range(1 << len(pairs)):
        vals: list[Nat] = []
        for j in range(m):
            U = [vals[a] for b, (a, c) in enumerate(pairs) if c == j and mask >> b & 1]
            W = [vals[a] for b, (a, c) in enumerate(pairs) if c == j and not mask >> b & 1]
            vals.append(find_witness(U, W))
        pos = {lab: vals[i] for i, lab in enumerate(labels)}
        if R.holds(tuple(pos[p] for p in pattern), bound):
            return True
    return False


def bit_matrix(bound: int) -> np.ndarray:
    """BIT adjacency on 0..bound as a boolean matrix."""
    n = np.arange(bound + 1)
    out = np.zeros((bound + 1, bound + 1), dtype=bool)
    for m in range(max(bound, 1).bit_length()):
        out[m, :] = ((n >> m) & 1).astype(bool) & (n > m)
    return out | out.T


def _binary_qf(R) -> bool:
    return isinstance(R, Relation) and R.arity == 2 and not R.quantified


def _relation_matrix(node, adj: np.ndarray) -> np.ndarray:
    """Truth table of a binary quantifier-free formula over 0..bound."""
    size = adj.shape[0]
    eq = np.eye(size, dtype=bool)

    def go(nd):
        head = nd[0]
        if head in ("E", "N", "="):
            base = {"E": adj, "N": ~adj & ~eq, "=": eq}[head]
            i, j = nd[1], nd[2]
            if i == j:
                d = base.diagonal()
                return np.broadcast_to(d[:, None] if i == 0 else d[None, :], (size, size)).copy()
            return base.copy() if i == 0 else base.T.copy()
        if head == "true":
            return np.ones((size, size), dtype=bool)
        if head == "false":
            return np.zeros((size, size), dtype=bool)
        if head == "not":
            return ~go(nd[1])
        parts = [go(a) for a in nd[1:]]
        out = parts[0].copy()
        for p in parts[1:]:
            if head == "and":
                out &= p
            elif head == "or":
                out |= p
            else:
                out ^= p
        return out

    return go(node)


def injective_square_hom(
    elements: Sequence[Nat],
    relations: Sequence,
    bound: int,
    node_budget: int | None = None,
    eval_bound: int = 64,
) -> SquareHomResult:
    """Injective map from the grid elements x elements into {0..bound}
    preserving every relation that holds coordinatewise in both projections.

    Points are assigned in lexicographic order and values are tried in
    increasing order, so the first solution found is the lex-first one.
    Arc consistency only removes values that cannot extend to a solution,
    so it does not change which solution comes first.
    """
    elements = list(elements)
    points, cons = square_constraints(elements, relations, eval_bound)
    for R, idx in cons:
        if not _satisfiable_injectively(R, idx, eval_bound):
            return SquareHomResult(None, 0, len(cons), f"{R.name} on points {list(idx)} cannot hold injectively")
    n = len(points)
    adj = bit_matrix(bound)
    # binary quantifier-free constraints are kept as value matrices and
    # enforced by arc consistency; everything else is checked on assignment
    mats: dict[int, np.ndarray] = {}
    arcs: dict[tuple[int, int], list[np.ndarray]] = {}
    by_last: list[list] = [[] for _ in points]
    for R, idx in cons:
        if _binary_qf(R) and idx[0] != idx[1]:
            if id(R) not in mats:
                table = _relation_matrix(R.formula, adj)
                # plain disequality is already enforced by injectivity
                implied = np.array_equal(table, ~np.eye(bound + 1, dtype=bool))
                mats[id(R)] = None if implied else table.astype(np.float32)
            M = mats[id(R)]
            if M is None:
                continue
            i, j = idx
            arcs.setdefault((i, j), []).append(M)
            arcs.setdefault((j, i), []).append(M.T)
        else:
            by_last[max(idx)].append((R, idx))
    supporters = {j: [i for i in range(n) if (i, j) in arcs] for j in range(n)}
    nodes = 0
    exhausted = False

    def propagate(doms: list[np.ndarray], changed: list[int]) -> bool:
        while changed:
            j = changed.pop()
            dj = doms[j]
            count = int(dj.sum())
            if count == 0:
                return False
            if count == 1:
                # injectivity: a fixed value is unavailable to every other point
                v = int(np.flatnonzero(dj)[0])
                for k in range(n):
                    if k != j and doms[k][v]:
                        doms[k] = doms[k].copy()
                        doms[k][v] = False
                        if not doms[k].any():
                            return False
                        changed.append(k)
            dj_f = dj.astype(np.float32)
            for i in supporters[j]:
                keep = doms[i].copy()
                for M in arcs[(i, j)]:
                    keep &= (M @ dj_f) > 0
                if not np.array_equal(keep, doms[i]):
                    if not keep.any():
                        return False
                    doms[i] = keep
                    changed.append(i)
        return True

    values: list[Nat] = [None] * n  # type: ignore[list-item]

    def go(i: int, doms: list[np.ndarray]) -> bool:
        nonlocal nodes, exhausted
        if i == n:
            return True
        for x in np.flatnonzero(doms[i]).tolist():
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                exhausted = True
                return False
            values[i] = x
            if not all(R.holds(tuple(values[j] for j in idx), eval_bound) for R, idx in by_last[i]):
                continue
            nxt = list(doms)
            only = np.zeros(bound + 1, dtype=bool)
            only[x] = True
            nxt[i] = only
            if propagate(nxt, [i]) and go(i + 1, nxt):
                return True
            if exhausted:
                return False
        return False

    start = [np.ones(bound + 1, dtype=bool) for _ in points]
    if not propagate(start, list(range(n))):
        return SquareHomResult(None, 0, len(cons), "no solution within bound")
    ok = go(0, start)
    if ok:
        return SquareHomResult({p: values[i] for i, p in enumerate(points)}, nodes, len(cons))
    reason = "node budget exhausted" if exhausted else "no solution within bound"
    return SquareHomResult(None, nodes, len(cons), reason)


def verify_square_hom(mapping: dict, elements: Sequence[Nat], relations: Sequence, eval_bound: int = 64) -> bool:
    points, cons = square_constraints(list(elements), relations, eval_bound)
    if len(set(mapping.values())) != len(mapping) or set(mapping) != set(points):
        return False
    return all(R.holds(tuple(mapping[points[j]] for j in idx), eval_bound) for R, idx in cons)


def distinct_tuples(values: Iterable[Nat], arity: int) -> list[tuple]:
    return list(permutations(sorted(set(values)), arity))
