"""Command-line interface: one subcommand per operation, JSON on stdout.

Exit codes: 0 success, 1 domain error, 2 budget exhausted or search
inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import behavior, closure, core, galois, operations, ramsey
from .btypes import BinaryType
from .generic import GenericStructure, NodeConstraint
from .naturals import NatCodec

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# argument parsing helpers

def parse_set(text: str) -> list[int]:
    """``"0..9"``, ``"0,1,3"``, a mix like ``"0..3,7"``, or empty."""
    out: list[int] = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad vertex set {text!r}") from None
    return sorted(set(out))


def parse_pairs(text: str) -> dict[int, int]:
    """``"0:1,1:3"``."""
    out = {}
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        try:
            a, b = part.split(":")
            out[int(a)] = int(b)
        except ValueError:
            raise UsageError(f"bad pair list {text!r}") from None
    return out


def load_json(text: str):
    """Inline JSON, ``-`` for stdin, or a file path."""
    try:
        if text == "-":
            return json.load(sys.stdin)
        if text.lstrip().startswith(("{", "[")):
            return json.loads(text)
        return json.loads(Path(text).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {text[:40]!r}: {exc}") from None


def _graph(text: str) -> core.FiniteGraph:
    try:
        return ramsey.parse_graph(text)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad graph {text!r}: {exc}") from None


def _btype(text: str) -> BinaryType:
    try:
        return BinaryType.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _relation(text: str, arity: int | None = None):
    try:
        return galois.relation_from_text(text, arity)
    except galois.RelationSyntaxError as exc:
        raise UsageError(str(exc)) from None


# operations by name

UNARY_OPS = ("identity", "constant", "eE", "eN", "minus", "switch", "reversal")


def build_op(args) -> operations.FunctionSample:
    if getattr(args, "sample", None):
        return operations.FunctionSample.from_json(load_json(args.sample))
    name = args.op
    if name is None:
        raise UsageError("give --op or --sample")
    if name == "binary":
        if not args.spec:
            raise UsageError("--op binary needs --spec")
        A = parse_set(args.A or args.on or "0..5")
        B = parse_set(args.B or args.on or "0..5")
        f = operations.make_binary_injection(_btype(args.spec), A, B)
    else:
        S = parse_set(args.on or "0..9")
        if name == "identity":
            f = operations.make_identity(S)
        elif name == "constant":
            f = operations.make_constant(S, args.value)
        elif name == "eE":
            f = operations.make_eE(S)
        elif name == "eN":
            f = operations.make_eN(S)
        elif name == "minus":
            f = operations.make_minus(S)
        elif name == "sw":
            f = operations.make_switch([0], S)
        elif name == "switch":
            f = operations.make_switch(parse_set(args.flip or "0"), S)
        elif name == "reversal":
            f = operations.make_reversal(S)
        elif name == "collapse":
            f = closure.collapsing_generator(S)
        elif name == "delete-edge":
            f = closure.edge_deleting_generator(S)
        else:
            raise UsageError(f"unknown operation {name!r}")
    if getattr(args, "dual", False):
        f = operations.dual(f)
    return f


OP_NAMES = UNARY_OPS + ("sw", "binary", "collapse", "delete-edge")


def _op_flags(p: argparse.ArgumentParser):
    p.add_argument("--op", choices=OP_NAMES, help="operation constructor")
    p.add_argument("--sample", help="function sample as JSON (inline, file, or -)")
    p.add_argument("--on", "--range", dest="on", help="domain set, e.g. 0..9")
    p.add_argument("--flip", help="switch set (for --op switch)")
    p.add_argument("--value", type=int, default=0, help="constant value")
    p.add_argument("--spec", help="binary type, e.g. max,id,id,id[,p1[,inc]]")
    p.add_argument("--A", help="first coordinate set for binary ops")
    p.add_argument("--B", help="second coordinate set for binary ops")
    p.add_argument("--dual", action="store_true", help="take the dual of the built op")


# commands; each returns (payload, exit code)

def cmd_witness(args, codec):
    v = core.find_witness(parse_set(args.adj), parse_set(args.nonadj))
    return {"vertex": codec.encode(v)}


def cmd_subgraph(args, codec):
    if args.verify:
        g = core.FiniteGraph.from_json(load_json(args.verify))
        return {"bit_induced": g.is_bit_induced()}
    g = core.induced_subgraph(parse_set(args.vertices))
    out = g.to_json(codec)
    if args.dot:
        out["dot"] = g.to_dot()
    return out


def cmd_extend_iso(args, codec):
    if args.verify:
        p = core.PartialIso.from_json(load_json(args.verify))
        return {"isomorphism": True, "size": len(p.pairs)}
    p = core.PartialIso(parse_pairs(args.pairs))
    for v in parse_set(args.add or ""):
        p = core.extend_iso(p, v)
    for v in parse_set(args.back or ""):
        p = core.extend_iso(p.inverse(), v).inverse()
    return p.to_json(codec)


def cmd_make_op(args, codec):
    return build_op(args).to_json(codec)


def cmd_classify(args, codec):
    f = build_op(args)
    kind = args.kind or ("unary" if f.arity == 1 else "binary")
    if kind == "unary":
        g = core.induced_subgraph(x for (x,) in f.entries)
        return {"arity": 1, "behavior": behavior.classify_unary(f, g).to_json()}
    t = behavior.classify_binary(f)
    return {"arity": 2, "type": t.to_json(), "class": behavior.minimality_class(t)}


def _env(items: Sequence[str]) -> dict:
    env = {}
    for item in items:
        name, sep, spec = item.partition("=")
        if not sep:
            name, spec = "f", item
        env[name.strip()] = _btype(spec)
    return env


def cmd_compose_types(args, codec):
    env = _env(args.type)
    t = behavior.compose_types(args.term, env)
    out = {"term": args.term, "type": t.to_json(), "class": behavior.minimality_class(t)}
    if args.realize:
        side = parse_set(args.realize)
        got = behavior.classify_binary(behavior.realize_term(args.term, env, side, side))
        out["realized"] = got.to_json()
        out["agrees"] = got == t
    return out


def cmd_minimality(args, codec):
    t = _btype(args.type)
    c = behavior.minimality_class(t)
    out = {"type": t.to_json(), "class": c, "name": behavior.CLASS_NAMES.get(c, c)}
    if args.closure:
        ok, bad = behavior.closure_stays_in_class(t, args.closure)
        out["closed"] = ok
        out["escapes"] = [b.to_json() for b in bad]
    return out


def cmd_arrow_check(args, codec):
    S, H, P = _graph(args.S), _graph(args.H), _graph(args.P)
    if args.verify_witness:
        data = load_json(args.verify_witness)
        w = data["witness"] if "witness" in data else data
        coloring = [w[str(i)] for i in range(len(w))]
        return {"valid_witness": ramsey.verify_witness(S, H, P, args.k, coloring)}
    res = ramsey.arrow_check(S, H, P, args.k, args.budget)
    return res.to_json()


def cmd_arrow_search(args, codec):
    H, P = _graph(args.H), _graph(args.P)
    S = ramsey.arrow_search(H, P, args.k, args.max_size, args.budget, args.jobs)
    return {"found": S is not None, "graph": ramsey.graph_string(S) if S is not None else None}


def _embedding_json(emb, codec):
    if emb is None:
        return {"found": False}
    return {"found": True, "embedding": [[codec.encode(v), codec.encode(w)] for v, w in emb.items()]}


def cmd_mono_copy(args, codec):
    f = build_op(args)
    H = _graph(args.H)
    region = parse_set(args.region) if args.region else [x for (x,) in f.entries]
    return _embedding_json(ramsey.find_mono_copy(f, H, region), codec)


def cmd_canonical_copy(args, codec):
    f = build_op(args)
    H = _graph(args.H)
    region = parse_set(args.region) if args.region else [x for (x,) in f.entries]
    consts = parse_pairs(args.constants or "")
    out = _embedding_json(ramsey.find_canonical_copy(f, H, region, consts), codec)
    if out["found"]:
        emb = dict(ramsey.find_canonical_copy(f, H, region, consts))
        parts = [[emb[v] for v in p] for p in ramsey.profile_parts(H, list(consts))]
        g = core.induced_subgraph(emb.values())
        out["behavior"] = behavior.is_canonical_partitioned(f, g, parts).to_json()
    return out


def cmd_eval_rel(args, codec):
    R = _relation(args.rel, args.arity)
    t = parse_set_tuple(args.tuple)
    res = R.evaluate(t, args.bound, not args.bounded_only)
    return {"relation": R.name, "tuple": list(t), **res.to_json()}


def parse_set_tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad tuple {text!r}") from None


def cmd_preserves(args, codec):
    f = build_op(args)
    R = _relation(args.rel, args.arity)
    values = parse_set(args.tuples_from) if args.tuples_from else sorted({x for p in f.entries for x in p})
    res = galois.preserves(f, R, galois.all_tuples(values, R.arity), args.bound)
    return {"relation": R.name, **res.to_json()}


def cmd_ic_check(args, codec):
    if args.tuples:
        tuples = load_json(args.tuples)
    else:
        R = _relation(args.rel, args.arity)
        tuples = [t for t in galois.all_tuples(parse_set(args.range), R.arity) if R.holds(t, args.bound)]
    return galois.intersection_closed_check(tuples).to_json()


def cmd_square_hom(args, codec):
    elements = parse_set(args.elements)
    rels = [_relation(r) for r in args.rels.split(",") if r]
    if args.verify:
        data = load_json(args.verify)
        mapping = {tuple(p): v for p, v in data["mapping"]}
        return {"valid": galois.verify_square_hom(mapping, elements, rels, args.eval_bound)}
    res = galois.injective_square_hom(elements, rels, args.bound, args.budget, args.eval_bound)
    out = res.to_json()
    if res.mapping is None and res.reason == "node budget exhausted":
        return out, EXIT_BUDGET
    return out


def _target(args) -> operations.FunctionSample:
    if args.target:
        return operations.FunctionSample.from_json(load_json(args.target))
    if not args.target_op:
        raise UsageError("give --target or --target-op")
    ns = argparse.Namespace(
        sample=None, op=args.target_op, on=args.target_on, flip=None, value=args.target_value,
        spec=None, A=None, B=None, dual=False,
    )
    return build_op(ns)


def cmd_interpolate(args, codec):
    gens = [build_op(_gen_namespace(g, args.region)) for g in args.generator]
    target = _target(args)
    if args.verify:
        d = closure.Derivation.from_json(load_json(args.verify))
        return {"valid": closure.check_derivation(d, gens, target)}
    goal = closure.InterpolationGoal(target, args.depth)
    d = closure.interpolate_search(gens, goal, args.moves, args.max_embeddings)
    if d is None:
        return {"found": False, "reason": "fixpoint reached"}
    return {"found": True, **d.to_json(codec)}


def _gen_namespace(text: str, region: str | None):
    if text.lstrip().startswith("{") or Path(text).suffix == ".json":
        return argparse.Namespace(sample=text, dual=False)
    return argparse.Namespace(
        sample=None, op=text, on=region, flip=None, value=0, spec=None, A=None, B=None, dual=False
    )


def cmd_delete_edge(args, codec):
    e = build_op(_gen_namespace(args.generator, args.region))
    g = core.induced_subgraph(parse_set(args.graph))
    if args.all:
        total, history = closure.delete_all_edges(e, g)
        final = history[-1]
        return {"sample": total.to_json(codec), "steps": len(history) - 1, "graph": final.to_json(codec)}
    if not g.edges():
        raise core.RadoError("graph has no edge to delete")
    edge = tuple(parse_set_tuple(args.edge)) if args.edge else g.edges()[0]
    step = closure.delete_one_edge(e, g, edge)
    return {"sample": step.to_json(codec), "graph": core.induced_subgraph(step.image()).to_json(codec)}


def cmd_generic(args, codec):
    G = GenericStructure(args.signature, args.seed)
    for _ in range(args.nodes):
        G.fresh_node()
    for spec in args.add or []:
        data = load_json(spec)
        interval = data.get("interval")
        G.fresh_node(NodeConstraint(
            frozenset(data.get("adj", [])), frozenset(data.get("nonadj", [])),
            tuple(interval) if interval is not None else None,
        ))
    return G.snapshot()


# parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rado", description="Finite computations in the random graph (BIT model).")
    p.add_argument("--pretty", action="store_true", help="indented output")
    p.add_argument("--jobs", type=int, default=1, help="worker cap for parallel searches")
    p.add_argument("--seed", type=int, default=0, help="seed for the generic engine")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("witness", help="least vertex adjacent to --adj and not to --nonadj")
    s.add_argument("--adj", default="")
    s.add_argument("--nonadj", default="")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("subgraph", help="induced subgraph on a vertex set")
    s.add_argument("--vertices", default="")
    s.add_argument("--dot", action="store_true")
    s.add_argument("--verify", help="graph JSON to check against the BIT model")
    s.set_defaults(func=cmd_subgraph)

    s = sub.add_parser("extend-iso", help="extend a partial isomorphism")
    s.add_argument("--pairs", default="")
    s.add_argument("--add", help="domain points to add (forth)")
    s.add_argument("--back", help="image points to cover (back)")
    s.add_argument("--verify", help="partial isomorphism JSON to validate")
    s.set_defaults(func=cmd_extend_iso)

    s = sub.add_parser("make-op", help="build a function sample")
    _op_flags(s)
    s.set_defaults(func=cmd_make_op)

    s = sub.add_parser("classify", help="classify a unary or binary sample")
    _op_flags(s)
    s.add_argument("--kind", choices=("unary", "binary"))
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("compose-types", help="predict the type of a term")
    s.add_argument("--term", required=True)
    s.add_argument("--type", action="append", required=True, help="NAME=SPEC, repeatable")
    s.add_argument("--realize", help="also realize on this set squared and classify")
    s.set_defaults(func=cmd_compose_types)

    s = sub.add_parser("minimality", help="minimality class of a binary type")
    s.add_argument("--type", required=True)
    s.add_argument("--closure", type=int, default=0, help="rounds of closure checking")
    s.set_defaults(func=cmd_minimality)

    s = sub.add_parser("arrow-check", help="decide S -> (H)^P_k")
    for name in ("S", "H", "P"):
        s.add_argument(f"--{name}", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--budget", type=int)
    s.add_argument("--verify-witness", help="arrow-check JSON whose witness coloring to verify")
    s.set_defaults(func=cmd_arrow_check)

    s = sub.add_parser("arrow-search", help="least ordered graph S with S -> (H)^P_k")
    s.add_argument("--H", required=True)
    s.add_argument("--P", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--max-size", type=int, required=True)
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_arrow_search)

    s = sub.add_parser("mono-copy", help="copy of H on which a unary sample is canonical")
    _op_flags(s)
    s.add_argument("--H", required=True)
    s.add_argument("--region")
    s.set_defaults(func=cmd_mono_copy)

    s = sub.add_parser("canonical-copy", help="canonical copy of H with fixed constants")
    _op_flags(s)
    s.add_argument("--H", required=True)
    s.add_argument("--region")
    s.add_argument("--constants", help="H-vertex:region-vertex pairs")
    s.set_defaults(func=cmd_canonical_copy)

    s = sub.add_parser("eval-rel", help="evaluate a relation on a tuple")
    s.add_argument("--rel", required=True)
    s.add_argument("--arity", type=int)
    s.add_argument("--tuple", required=True)
    s.add_argument("--bound", type=int, default=64)
    s.add_argument("--bounded-only", action="store_true", help="no witness search past the bound")
    s.set_defaults(func=cmd_eval_rel)

    s = sub.add_parser("preserves", help="does a sample preserve a relation")
    _op_flags(s)
    s.add_argument("--rel", required=True)
    s.add_argument("--arity", type=int)
    s.add_argument("--tuples-from", help="values for test tuples (default: the sample's domain)")
    s.add_argument("--bound", type=int, default=64)
    s.set_defaults(func=cmd_preserves)

    s = sub.add_parser("ic-check", help="is a relation closed under disequality intersection")
    s.add_argument("--rel")
    s.add_argument("--arity", type=int)
    s.add_argument("--range", default="0..5")
    s.add_argument("--tuples", help="explicit tuples as a JSON list")
    s.add_argument("--bound", type=int, default=64)
    s.set_defaults(func=cmd_ic_check)

    s = sub.add_parser("square-hom", help="injective square homomorphism into BIT")
    s.add_argument("--elements", default="0..3")
    s.add_argument("--rels", default="E,N,neq")
    s.add_argument("--bound", type=int, default=500)
    s.add_argument("--budget", type=int)
    s.add_argument("--eval-bound", type=int, default=64)
    s.add_argument("--verify", help="square-hom JSON whose mapping to verify")
    s.set_defaults(func=cmd_square_hom)

    s = sub.add_parser("interpolate", help="search for a term matching a target sample")
    s.add_argument("--generator", action="append", required=True,
                   help="op name (built on --region) or sample JSON; repeatable")
    s.add_argument("--region", default="0..7")
    s.add_argument("--target", help="target sample JSON")
    s.add_argument("--target-op", choices=OP_NAMES)
    s.add_argument("--target-on")
    s.add_argument("--target-value", type=int, default=0)
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--moves", choices=("any", "monotone"), default="any")
    s.add_argument("--max-embeddings", type=int)
    s.add_argument("--verify", help="derivation JSON to re-check")
    s.set_defaults(func=cmd_interpolate)

    s = sub.add_parser("delete-edge", help="remove an edge of a BIT subgraph with an edge-deleting generator")
    s.add_argument("--graph", required=True, help="BIT vertex set")
    s.add_argument("--generator", default="delete-edge")
    s.add_argument("--region", default="0..7")
    s.add_argument("--edge")
    s.add_argument("--all", action="store_true", help="repeat until no edge is left")
    s.set_defaults(func=cmd_delete_edge)

    s = sub.add_parser("generic", help="lazily built generic (ordered) graph")
    s.add_argument("--signature", choices=("graph", "ordered-graph"), default="graph")
    s.add_argument("--nodes", type=int, default=5)
    s.add_argument("--add", action="append", help='constrained node JSON: {"adj":[..],"nonadj":[..],"interval":[lo,hi]}')
    s.set_defaults(func=cmd_generic)
    return p


def _dump(payload, pretty: bool) -> str:
    if pretty:
        return json.dumps(payload, indent=2, sort_keys=True)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (see --help)")
        args.jobs = max(1, args.jobs)
        codec = NatCodec()
        result = args.func(args, codec)
        code = EXIT_OK
        if isinstance(result, tuple):
            result, code = result
        print(_dump(codec.wrap(result), args.pretty), file=stdout)
        return code
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except (ramsey.BudgetExceeded, closure.SearchInconclusive, galois.WitnessNotFound) as exc:
        print(_dump({"error": str(exc), "kind": type(exc).__name__}, False), file=stdout)
        return EXIT_BUDGET
    except core.RadoError as exc:
        print(_dump({"error": str(exc), "kind": type(exc).__name__}, False), file=stdout)
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE


def main() -> None:
    sys.exit(run())
