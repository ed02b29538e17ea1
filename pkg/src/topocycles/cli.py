"""Command-line front end.

Every subcommand writes JSON by default (``--table`` for a plain listing).
Exit codes: 0 on success, 1 when the mathematical verdict is negative
(a violated cut, a non-boundary, distinct words, ...), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import cech, cyclespace, homology, spanning, traces, words
from .graphs import FAMILY_NAMES, GraphError, LeveledFamily, OrientedEdge, builtin, id_key
from .linalg import smith_normal_form


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _plain(x: Any) -> Any:
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [_plain(v) for v in sorted(x, key=id_key)]
    return x


def _emit(obj: Any, table: bool, out) -> None:
    obj = _plain(obj)
    if not table:
        out.write(json.dumps(obj, indent=2) + "\n")
        return
    rows = obj if isinstance(obj, list) else obj.get("rows") if isinstance(obj, dict) and "rows" in obj else None
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k != "rows":
                out.write(f"{k}\t{json.dumps(v) if isinstance(v, (dict, list)) else v}\n")
    if rows and all(isinstance(r, dict) for r in rows):
        cols = list(rows[0])
        out.write("\t".join(cols) + "\n")
        for r in rows:
            out.write("\t".join(str(r.get(c, "")) for c in cols) + "\n")


# ---------------------------------------------------------------------------
# shared helpers


def _family(args) -> LeveledFamily:
    name = args.family
    if name is None:
        raise UsageError("--family is required")
    try:
        if name == "finite":
            if not args.graph:
                raise UsageError("family 'finite' needs --graph (e.g. K4 or a JSON file)")
            return builtin("finite", graph=_load_graph(args.graph), root=None)
        return builtin(name)
    except GraphError as exc:
        raise UsageError(str(exc)) from exc


def _load_graph(source: str):
    from .graphs import load_graph, named_graph

    if source.endswith(".json") or source == "-":
        return load_graph(_read(source))
    return named_graph(source)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _json_arg(path: str) -> Any:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _tree(fam: LeveledFamily, depth: int, kind: str = "normal") -> spanning.RootedTree:
    if kind == "comb":
        if fam.name != "ladder":
            raise UsageError("the comb tree is only defined for the ladder")
        return spanning.comb_tree(fam, depth)
    return spanning.normal_spanning_tree(fam, depth)


def default_ray(fam: LeveledFamily) -> words.ChordRay:
    """Chord ray towards the right-hand end of the ladder families."""
    if fam.name == "ladder":
        return words.ChordRay(0, 1, "")
    if fam.name == "double_ladder":
        return words.ChordRay(1, 2, "+")
    raise UsageError(f"no default chord ray for family {fam.name}")


_NAMED_WORDS = {"fig1": words.fig1_word, "rho": words.rho_word}


def _word_arg(text: str):
    """A finite word ("+0 -1"), a symbolic word ("ray ...; asc(0,+)"), a
    named word (fig1, rho) or "empty"."""
    t = text.strip()
    if t in _NAMED_WORDS:
        return _NAMED_WORDS[t]
    if t in ("", "empty"):
        return ()
    try:
        if t.startswith("ray"):
            return words.parse_symbolic(t)
        return words.parse_word(t)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _steps(text: str) -> list[OrientedEdge]:
    out = []
    for tok in text.split():
        if tok[0] not in "+-":
            raise UsageError(f"step {tok!r} must start with + or -")
        out.append(OrientedEdge(tok[1:], tok[0] == "+"))
    return out


def _edge_function(args, fam: LeveledFamily) -> cyclespace.EdgeFunction:
    if args.phi_file:
        return cyclespace.edge_function_from_json(_json_arg(args.phi_file))
    if args.phi:
        try:
            return cyclespace.SymbolicEdgeFunction(fam.name, args.phi)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    raise UsageError("give --phi RULE or --phi-file FILE")


def _size_bound(args, fam: LeveledFamily) -> int:
    if args.size_bound is not None:
        return args.size_bound
    return len(fam.ball(max(args.depth - 1, 0)).vertices)


def _chain(args, fam: LeveledFamily) -> homology.Chain1:
    data = _json_arg(args.chain)
    return homology.Chain1.from_json(fam.ball(args.depth), data)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, exit code)


def cmd_family(args):
    fam = _family(args)
    g = fam.ball(args.depth)
    return {"family": fam.name, "depth": args.depth, "address": fam.address(args.depth),
            "vertex_count": len(g.vertices), "edge_count": len(g.edges), "graph": g.to_json()}, 0


def cmd_nst(args):
    fam = _family(args)
    t = _tree(fam, args.depth, args.tree)
    idx = spanning.chord_index(t)
    out = t.to_json()
    out.update({"normal": t.is_normal(), "chords": list(idx.chords)})
    return out, 0


def cmd_cuts(args):
    fam = _family(args)
    t = _tree(fam, args.depth)
    cuts = spanning.tree_cuts(fam, t, args.depth, _size_bound(args, fam))
    return {"depth": args.depth, "count": len(cuts), "cuts": cuts}, 0


def cmd_member(args):
    fam = _family(args)
    phi = _edge_function(args, fam)
    out: dict = {}
    verdicts = []
    if args.method in ("cuts", "both"):
        v = cyclespace.membership_by_cuts(phi, fam, args.depth, _size_bound(args, fam))
        out["cuts"] = v
        verdicts.append(v)
    if args.method in ("reconstruction", "both"):
        v = cyclespace.membership_by_reconstruction(phi, fam, args.depth)
        out["reconstruction"] = v
        verdicts.append(v)
    return out, 0 if all(v.ok for v in verdicts) else 1


def cmd_reduce(args):
    w = _word_arg(args.word)
    if isinstance(w, words.SymbolicWord):
        w = words.restrict(w, range(args.depth + 1))
    r = words.reduce(w)
    return {"word": words.format_word(w), "reduced": words.format_word(r), "length": len(w), "reduced_length": len(r)}, 0


def cmd_equiv(args):
    v = words.equivalent(_word_arg(args.left), _word_arg(args.right), args.depth)
    return v, 0 if v.ok else 1


def cmd_permanent(args):
    w = _word_arg(args.word)
    if isinstance(w, words.SymbolicWord):
        v = words.is_reduced_symbolic(w, args.depth)
        return v, 0 if v.ok else 1
    flags = words.permanent_positions(w)
    return {"word": words.format_word(w), "permanent": flags, "reduced": all(flags)}, 0 if all(flags) else 1


def cmd_ninv(args):
    w = _word_arg(args.word)
    rows = [{"k": k, "n_plus": words.n_plus(w, k), "n": words.n_inv(w, k)} for k in range(args.k + 1)]
    return {"rows": rows}, 0


def cmd_trace(args):
    fam = _family(args)
    t = _tree(fam, args.depth, args.tree)
    idx = spanning.chord_index(t)
    start = args.start if args.start is not None else fam.root
    if isinstance(fam.root, int):
        start = int(start)
    walk = traces.Walk.from_steps(t.host, start, _steps(args.steps))
    tr = traces.trace(walk, t, idx)
    r = words.reduce(tr)
    return {"walk_length": len(walk), "trace": words.format_word(tr), "trace_length": len(tr),
            "reduced": words.format_word(r), "reduced_length": len(r)}, 0


def cmd_euler(args):
    fam = _family(args)
    t = _tree(fam, args.depth)
    walk = traces.euler_tour(t)
    counts = traces.pass_counts(walk)
    once = all(counts.get(e, (0, 0)) == (1, 1) for e in t.tree_edges)
    return {"length": len(walk), "closed": walk.closed, "net_zero": traces.net_traversal(walk).is_zero(),
            "each_tree_edge_once_each_way": once, "walk": walk}, 0


def _rho_report(fam: LeveledFamily, depth: int, kmax: int) -> dict:
    t = spanning.normal_spanning_tree(fam, depth)
    idx = spanning.chord_index(t)
    walk, w = traces.rho_walk(fam, t, idx, default_ray(fam), depth)
    net = traces.net_traversal(walk)
    inner = fam.ball(depth - 1)
    reduced = words.is_reduced_symbolic(w, kmax + 4)
    return {
        "family": fam.name,
        "depth": depth,
        "walk_length": len(walk),
        "net_zero_on_ball": all(net.value(e.id) == 0 for e in inner.edges),
        "word": w.to_text(),
        "reduced": reduced,
        "N": [{"k": k, "N": words.N_word(w, k)} for k in range(kmax + 1)],
    }


def cmd_rho(args):
    fam = _family(args)
    rep = _rho_report(fam, args.depth, args.k)
    return rep, 0 if rep["net_zero_on_ball"] and rep["reduced"].ok else 1


def cmd_fhom(args):
    if args.symbolic:
        sc = _symbolic_chain(args.symbolic)
        f = homology.f_hom(sc, args.depth)
        return {"depth": args.depth, "function": f}, 0
    fam = _family(args)
    z = _chain(args, fam)
    try:
        f = homology.f_hom(z)
    except homology.NonZeroBoundary as exc:
        return {"error": str(exc), "boundary": homology.boundary(z)}, 1
    return {"function": f}, 0


def cmd_certify(args):
    fam = _family(args)
    z = _chain(args, fam)
    if args.verify:
        cert = homology.BoundaryCertificate.from_json(fam.ball(args.depth), _json_arg(args.verify))
        ok = homology.verify_certificate(z, cert)
        return {"verified": ok, "items": len(cert.items)}, 0 if ok else 1
    try:
        cert = homology.certify_boundary(z)
    except homology.NotABoundary as exc:
        return {"verdict": "NotABoundary", "edge": exc.edge, "value": exc.value}, 1
    except homology.NonZeroBoundary as exc:
        return {"verdict": "NotACycle", "error": str(exc)}, 1
    out = cert.to_json()
    out["verdict"] = "Boundary"
    return out, 0


def _symbolic_chain(name: str) -> homology.SymbolicChain:
    if name == "psi":
        return homology.psi_chain()
    if name == "cancelling":
        return homology.cancelling_boundaries_chain()
    raise UsageError(f"unknown symbolic chain {name!r}; expected psi or cancelling")


def cmd_validate_rep(args):
    v = homology.validate_standard_representation(_symbolic_chain(args.rep), args.depth, args.sample_budget)
    return v, 0 if v.ok else 1


def cmd_cech(args):
    fam = _family(args)
    rows = []
    for n in range(args.n + 1):
        d = max(args.depth, n + 2) if args.depth is not None else n + 2
        rows.append(cech.level_report(fam, n, args.m, d).to_json())
    ok = all(r["chords"] == r["nerve_betti1"] == r["contraction_rank"] and not r["torsion"] for r in rows)
    return {"family": fam.name, "m": args.m, "rows": rows}, 0 if ok else 1


def cmd_snf(args):
    a = _json_arg(args.matrix)
    if not isinstance(a, list) or not all(isinstance(r, list) for r in a):
        raise UsageError("matrix must be a JSON array of rows")
    r = smith_normal_form(a)
    return {"diagonal": r.diagonal, "invariants": list(r.invariants), "rank": r.rank,
            "left": r.left, "right": r.right}, 0


def cmd_demo(args):
    if args.scenario == "fig1":
        return demo_fig1(args.depth), 0
    if args.scenario == "double-ladder":
        rep = demo_double_ladder(args.depth)
        return rep, 0
    if args.scenario == "rho":
        rep = _rho_report(builtin("ladder"), args.depth, args.k)
        return rep, 0
    raise UsageError(f"unknown demo {args.scenario!r}")


def demo_fig1(depth: int) -> dict:
    """Out along the lower stile of the ladder to v_{depth+1} and back, traced
    against the comb tree (upper stile plus rungs)."""
    fam = builtin("ladder")
    t = spanning.comb_tree(fam, depth + 1)
    idx = spanning.chord_index(t)
    out = [OrientedEdge(f"e{i}", True) for i in range(depth + 1)]
    walk = traces.Walk.from_steps(t.host, "v0", out + [oe.reverse() for oe in reversed(out)])
    tr = traces.trace(walk, t, idx)
    r = words.reduce(tr)
    return {
        "depth": depth,
        "walk_length": len(walk),
        "trace": words.format_word(tr),
        "trace_length": len(tr),
        "reduced_length": len(r),
        "symbolic": words.equivalent(words.fig1_word, (), depth),
    }


def demo_double_ladder(depth: int) -> dict:
    fam = builtin("double_ladder")
    size = len(fam.ball(depth - 1).vertices)
    sc = homology.psi_chain()
    psi = homology.f_hom(sc, depth)
    phi = cyclespace.SymbolicEdgeFunction("double_ladder", "stiles-forward")
    return {
        "depth": depth,
        "psi_representation": homology.validate_standard_representation(sc, depth),
        "psi_values": psi,
        "psi_membership": cyclespace.membership_by_cuts(psi, fam, depth, size),
        "phi_membership": cyclespace.membership_by_cuts(phi, fam, depth, size),
        "cancelling_representation": homology.validate_standard_representation(
            homology.cancelling_boundaries_chain(), depth
        ),
    }


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topocycles", description="Cycle spaces, word reduction and homology of locally finite graphs.")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="table", action="store_false", help="JSON output (default)")
    g.add_argument("--table", dest="table", action="store_true", help="plain tab-separated output")
    g.set_defaults(table=False)
    fmt.add_argument("--seed", type=int, default=0, help="random seed (accepted everywhere for reproducibility)")

    def family_args(depth: int | None = 4) -> argparse.ArgumentParser:
        fp = argparse.ArgumentParser(add_help=False)
        fp.add_argument("--family", choices=FAMILY_NAMES)
        fp.add_argument("--graph", help="for --family finite: a name such as K4, C5, P3, S3 or a graph JSON file")
        fp.add_argument("--depth", type=int, default=depth)
        return fp

    fam = family_args()

    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, parents=(fmt,)):
        sp = sub.add_parser(name, help=help, description=help, parents=list(parents))
        sp.set_defaults(fn=fn)
        return sp

    add("family", cmd_family, "emit a truncation ball as graph JSON", (fmt, fam))
    sp = add("nst", cmd_nst, "normal spanning tree and chord order of a ball", (fmt, fam))
    sp.add_argument("--tree", choices=("normal", "comb"), default="normal")
    sp = add("cuts", cmd_cuts, "finite tree cuts of a ball", (fmt, fam))
    sp.add_argument("--size-bound", type=int)
    sp = add("member", cmd_member, "test membership of an edge function in the cycle space", (fmt, fam))
    sp.add_argument("--phi", help="named rule of the family (psi, stiles-forward, ...)")
    sp.add_argument("--phi-file", help="edge function JSON")
    sp.add_argument("--size-bound", type=int)
    sp.add_argument("--method", choices=("cuts", "reconstruction", "both"), default="cuts")

    sp = add("reduce", cmd_reduce, "free reduction of a word")
    sp.add_argument("--word", required=True)
    sp.add_argument("--depth", type=int, default=10, help="restriction depth for symbolic words")
    sp = add("equiv", cmd_equiv, "compare two words on restrictions to chords 0..depth")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--depth", type=int, default=20)
    sp = add("permanent", cmd_permanent, "permanent positions of a word (reducedness)")
    sp.add_argument("--word", required=True)
    sp.add_argument("--depth", type=int, default=10)
    sp = add("ninv", cmd_ninv, "ascending-interval counts of a word for k = 0..K")
    sp.add_argument("--word", required=True)
    sp.add_argument("--k", type=int, default=5)

    sp = add("trace", cmd_trace, "chord trace of a walk and its reduction", (fmt, fam))
    sp.add_argument("--steps", required=True, help='oriented edges, e.g. "+e0 +e1 -e1 -e0"')
    sp.add_argument("--start")
    sp.add_argument("--tree", choices=("normal", "comb"), default="normal")
    add("euler", cmd_euler, "Euler tour of the normal spanning tree", (fmt, fam))
    sp = add("rho", cmd_rho, "the out-and-back-twice loop along a chord ray", (fmt, fam))
    sp.add_argument("--k", type=int, default=10)

    sp = add("fhom", cmd_fhom, "net traversal function of a chain", (fmt, fam))
    sp.add_argument("--chain", help="chain JSON")
    sp.add_argument("--symbolic", help="named symbolic chain: psi")
    sp = add("certify", cmd_certify, "boundary certificate for a chain, or check one", (fmt, fam))
    sp.add_argument("--chain", required=True)
    sp.add_argument("--verify", help="certificate JSON to replay instead of producing one")
    sp = add("validate-rep", cmd_validate_rep, "sampled checks of a presentation as a sum of finite cycles")
    sp.add_argument("--rep", choices=("psi", "cancelling"), required=True)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--sample-budget", type=int, default=40)

    sp = add("cech", cmd_cech, "nerve Betti numbers against contraction ranks and chord counts", (fmt, family_args(None)))
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--m", type=int, default=2)
    sp = add("snf", cmd_snf, "Smith normal form of an integer matrix")
    sp.add_argument("--matrix", default="-", help="JSON array of rows (default: stdin)")

    sp = add("demo", cmd_demo, "worked examples")
    sp.add_argument("scenario", choices=("fig1", "double-ladder", "rho"))
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--k", type=int, default=6)
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, code = args.fn(args)
    except (UsageError, GraphError, words.ReductionError, traces.WalkError, spanning.NonNormalTreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, args.table, out)
    return code


def main() -> None:
    sys.exit(run())
