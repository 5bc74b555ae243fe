"""Command-line front end. Every command writes JSON lines: a config line, results, a summary.

Exit status is 0 when nothing failed. Errors are reported as one JSON line on
stderr carrying a stable code, with the matching nonzero exit status.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import io as gio
from .exactmath import ShapeError, SingularMatrixError
from .fields import FieldError, parse_field
from .graphcore import (
    BipartiteGraph,
    Digraph,
    GraphFormatError,
    GraphTooLarge,
    UndirectedGraph,
    cycle_to_matching_reduction,
    find_cycle_by_squaring,
    graph_report,
    max_matching,
)
from .matspace import (
    InfeasibleError,
    composition_series_length,
    congruence_to_isomorphism,
    conjugacy_to_permutation,
    graphical_space,
    max_nil_dim,
    max_rank,
    max_rdc_dim,
    nil_index,
    nilpotent_index,
    zero_eigenvalue_min,
)
from .quantum import (
    IndeterminateError,
    KrausMap,
    TransitionMatrix,
    channel_from_transition,
    channel_irreducible,
    operator_system,
    operator_system_connected,
    spectral_expansion_pair,
)
from .symbolic import (
    FieldTooSmall,
    NonHomogeneousPencil,
    nilindex_at_most,
    sdit_random,
    sdit_to_nilindex,
    snt_random,
)
from .verify import (
    CounterexampleFound,
    THEOREMS,
    explore_atkinson,
    summarize,
    verify_theorem,
)

# (exception type, code, exit status); first match wins
ERRORS = (
    (CounterexampleFound, "E_COUNTEREXAMPLE", 1),
    (GraphFormatError, "E_FORMAT", 2),
    (json.JSONDecodeError, "E_FORMAT", 2),
    (FileNotFoundError, "E_IO", 2),
    (GraphTooLarge, "E_INFEASIBLE", 3),
    (InfeasibleError, "E_INFEASIBLE", 3),
    (FieldTooSmall, "E_FIELD_TOO_SMALL", 3),
    (IndeterminateError, "E_INDETERMINATE", 4),
    (NonHomogeneousPencil, "E_INPUT", 2),
    (ShapeError, "E_SHAPE", 2),
    (SingularMatrixError, "E_SINGULAR", 2),
    (FieldError, "E_FIELD", 2),
    (KeyError, "E_INPUT", 2),
    (ValueError, "E_INPUT", 2),
)

SPACE_FIELD_CAP = 2**12  # largest |S_G| enumerated for analyze's space side


def workers(requested: int | None) -> int:
    cap = os.environ.get("GMS_THREADS")
    n = requested or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


class Report:
    def __init__(self, path: str | None):
        self.fh = open(path, "w") if path else sys.stdout
        self.failures = 0

    def line(self, obj):
        self.fh.write(gio.dumps(obj) + "\n")

    def close(self):
        if self.fh is not sys.stdout:
            self.fh.close()
        else:
            self.fh.flush()


def _config(args, **extra) -> dict:
    skip = {"func", "output"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg.update(extra)
    return {"config": cfg}


# analyze


def _space_side(g, field) -> tuple[dict, dict]:
    values, skipped = {}, {}
    s = graphical_space(g, field)
    enumerable = field.is_prime_field and field.p ** s.dim <= SPACE_FIELD_CAP

    def put(name, fn, needs_enum=True):
        if needs_enum and not enumerable:
            skipped[name] = f"|S_G| = {field.tag} ^ {s.dim} exceeds the cap {SPACE_FIELD_CAP}"
            return
        try:
            values[name] = fn()
        except (InfeasibleError, GraphTooLarge, ValueError) as exc:
            skipped[name] = str(exc)

    values["dim"] = s.dim
    if isinstance(g, BipartiteGraph):
        put("max_rank", lambda: max_rank(s, exhaustive=enumerable), needs_enum=False)
        return values, skipped
    put("composition_series_length", lambda: composition_series_length(s), needs_enum=False)
    put("nil_index", lambda: nil_index(s))
    put("nilpotent_index", lambda: nilpotent_index(s), needs_enum=False)
    put("zero_eigenvalue_min", lambda: zero_eigenvalue_min(s))
    put("max_nil_dim", lambda: max_nil_dim(s).certified_value)
    put("max_rdc_dim", lambda: max_rdc_dim(s).certified_value)
    return values, skipped


def cmd_analyze(args, out: Report):
    g = gio.load_graph(args.graph)
    field = parse_field(args.field)
    out.line(_config(args))
    values, skipped = graph_report(g)
    rec = {"graph": gio.graph_to_json(g), "graph_side": values, "skipped": skipped}
    if not args.no_space and not isinstance(g, UndirectedGraph):
        sv, ss = _space_side(g, field)
        rec["space_side"] = sv
        rec["space_skipped"] = ss
    out.line(rec)


# verify and the conjecture explorer


def _theorem_list(spec: Sequence[str]) -> list[str]:
    ids = [t.strip() for part in spec for t in part.split(",") if t.strip()]
    if ids == ["all"]:
        return list(THEOREMS)
    return ids


def _emit_cases(cases, out: Report, theorem_id: str):
    for c in cases:
        out.line(c.to_json())
    summ = summarize(cases)
    out.failures += summ["fail"]
    out.line({"summary": summ, "theorem_id": theorem_id})


def cmd_verify(args, out: Report):
    out.line(_config(args, workers=workers(args.workers)))
    total = {"pass": 0, "explored": 0, "fail": 0, "total": 0}
    for tid in _theorem_list(args.theorems):
        cases = verify_theorem(tid, n_max=args.n_max, field=args.field, n_min=args.n_min,
                               loops=not args.loopless, dedup=args.dedup, brute=args.brute,
                               samples=args.samples, seed=args.seed,
                               workers=workers(args.workers), halt=not args.keep_going,
                               repro_dir=args.repro_dir)
        _emit_cases(cases, out, tid)
        for k, v in summarize(cases).items():
            total[k] += v
    out.line({"summary": total, "theorem_id": "all"})


def cmd_search_atkinson(args, out: Report):
    out.line(_config(args, workers=workers(args.workers)))
    cases = explore_atkinson(args.n_max, args.field, args.n_min, not args.loopless, args.dedup,
                             workers(args.workers), halt=not args.keep_going,
                             repro_dir=args.repro_dir)
    _emit_cases(cases, out, "C1.16")


# polynomial identity testing and reductions


def cmd_pit(args, out: Report):
    b = gio.pencil_from_json(gio.load_json(args.pencil))
    out.line(_config(args))
    if args.test == "sdit":
        res = sdit_random(b, args.trials, args.field_size_hint, args.seed)
    elif args.test == "snt":
        res = snt_random(b, args.trials, args.field_size_hint, args.seed)
    else:
        if args.k is None:
            raise ValueError("nilindex needs --k")
        res = nilindex_at_most(b, args.k, args.trials, args.field_size_hint, args.seed)
    out.line({"verdict": res.verdict, "certified": res.certified, "witness": res.witness,
              "error_bound": res.error_bound, "seed": res.seed, "trials": res.trials,
              "sample_size": res.sample_size, "detail": res.detail})


def cmd_reduce(args, out: Report):
    out.line(_config(args))
    if args.kind == "sdit-to-nilindex":
        if not args.pencil:
            raise ValueError("sdit-to-nilindex needs --pencil")
        b = gio.pencil_from_json(gio.load_json(args.pencil))
        t, threshold = sdit_to_nilindex(b)
        rec = {"threshold": threshold, "size": t.n, "variables": t.m,
               "meaning": "det(B) is identically zero iff T^threshold is identically zero"}
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(gio.dumps(gio.pencil_to_json(t)) + "\n")
            rec["gadget_file"] = args.out
        else:
            rec["gadget"] = gio.pencil_to_json(t)
        out.line(rec)
        return
    if not args.graph:
        raise ValueError("cycle-to-matching needs --graph")
    g = gio.load_graph(args.graph)
    if not isinstance(g, Digraph):
        raise ValueError("cycle-to-matching needs a digraph")
    gadgets, decode = cycle_to_matching_reduction(g)
    cycle = None
    rows = []
    for gad in gadgets:
        size, matching = max_matching(gad.graph)
        perfect = size == gad.graph.m == gad.graph.n
        rows.append({"removed": None if gad.removed is None else gad.removed + 1,
                     "left": gad.graph.m, "right": gad.graph.n, "perfect": perfect})
        if perfect and cycle is None:
            cycle = decode(gad, matching)
    by_square = find_cycle_by_squaring(g)
    agree = (cycle is None) == (by_square is None)
    if not agree:
        out.failures += 1
    out.line({"gadgets": rows, "cycle": None if cycle is None else [v + 1 for v in cycle],
              "cyclic_by_squaring": by_square is not None, "agree": agree})


# isomorphism extraction


def _space_arg(graph_path: str | None, space_path: str | None, field):
    if space_path:
        return gio.space_from_json(gio.load_json(space_path))
    if graph_path:
        return graphical_space(gio.load_graph(graph_path), field)
    raise ValueError("give a graph or a space for each side")


def cmd_extract_iso(args, out: Report):
    field = parse_field(args.field)
    sg = _space_arg(args.g, args.sg, field)
    sh = _space_arg(args.h, args.sh, field)
    t = gio.matrix_from_json(gio.load_json(args.t), sg.field)
    out.line(_config(args))
    if args.kind == "conjugator":
        sigma = conjugacy_to_permutation(sg, sh, t)
    else:
        sigma = congruence_to_isomorphism(sg, sh, t)
    out.line({"kind": args.kind, "permutation": [s + 1 for s in sigma]})


# quantum


def cmd_quantum(args, out: Report):
    out.line(_config(args))
    if args.kind == "irreducible":
        if args.transition:
            with open(args.transition) as fh:
                p = TransitionMatrix(gio.parse_transition_csv(fh.read()))
            k = channel_from_transition(p)
        elif args.kraus:
            k = KrausMap(gio.kraus_from_json(gio.load_json(args.kraus)))
        else:
            raise ValueError("irreducible needs --transition or --kraus")
        out.line({"irreducible": channel_irreducible(k), "trace_preserving": k.trace_preserving,
                  "unital": k.unital})
        return
    if args.kind == "spectral":
        g = _undirected(args.graph)
        gv, cv = spectral_expansion_pair(g)
        out.line({"graph_value": gv, "channel_value": cv, "difference": abs(gv - cv)})
        return
    if args.space:
        f = gio.space_from_json(gio.load_json(args.space))
    else:
        f = operator_system(_undirected(args.graph))
    out.line({"connected": operator_system_connected(f), "dim": f.dim})


def _undirected(path: str | None) -> UndirectedGraph:
    if not path:
        raise ValueError("this command needs --graph")
    g = gio.load_graph(path)
    if not isinstance(g, UndirectedGraph):
        raise ValueError("this command needs an undirected graph")
    return g


# argument parsing


def _enumeration_flags(p: argparse.ArgumentParser):
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--n-min", type=int, default=None, help="defaults to --n-max")
    p.add_argument("--loopless", action="store_true", help="skip digraphs with loops")
    p.add_argument("--dedup", action="store_true", help="one digraph per isomorphism class")
    p.add_argument("--workers", type=int, default=None, help="capped by GMS_THREADS")
    p.add_argument("--keep-going", action="store_true",
                   help="record counterexamples instead of halting at the first")
    p.add_argument("--repro-dir", default=None, help="where counterexample files go")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gms", description=__doc__.splitlines()[0])
    ap.add_argument("--output", "-o", default=None, help="report path (default stdout)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="graph-side and space-side quantities of one graph")
    p.add_argument("graph")
    p.add_argument("--field", default="Fp:2")
    p.add_argument("--no-space", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check theorems over enumerated graphs")
    p.add_argument("--theorems", nargs="+", required=True,
                   help=f"ids from {', '.join(THEOREMS)}, or all")
    p.add_argument("--field", default=None, help="default F_2 (F_3 for T1.14)")
    p.add_argument("--brute", action="store_true", help="add the double brute-force oracles")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _enumeration_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search-atkinson", help="explore the cycle-cover eigenvalue conjecture")
    p.add_argument("--field", default="Fp:2")
    _enumeration_flags(p)
    p.set_defaults(func=cmd_search_atkinson, n_max=3)

    p = sub.add_parser("pit", help="randomized identity tests on a pencil")
    p.add_argument("test", choices=["sdit", "snt", "nilindex"])
    p.add_argument("--pencil", required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--field-size-hint", type=int, default=None)
    p.set_defaults(func=cmd_pit)

    p = sub.add_parser("reduce", help="run a reduction and emit its output")
    p.add_argument("kind", choices=["sdit-to-nilindex", "cycle-to-matching"])
    p.add_argument("--pencil")
    p.add_argument("--graph")
    p.add_argument("--out", help="gadget file for sdit-to-nilindex")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("extract-iso", help="turn a conjugator or congruator into a permutation")
    p.add_argument("kind", choices=["conjugator", "congruator"])
    p.add_argument("--t", required=True, help="matrix JSON")
    p.add_argument("--g", help="graph file for the source")
    p.add_argument("--h", help="graph file for the target")
    p.add_argument("--sg", help="space JSON for the source")
    p.add_argument("--sh", help="space JSON for the target")
    p.add_argument("--field", default="Q")
    p.set_defaults(func=cmd_extract_iso)

    p = sub.add_parser("quantum", help="channel irreducibility, spectral expansion, connectivity")
    p.add_argument("kind", choices=["irreducible", "spectral", "connected"])
    p.add_argument("--transition", help="CSV transition matrix")
    p.add_argument("--kraus", help="Kraus list JSON")
    p.add_argument("--graph", help="undirected graph file")
    p.add_argument("--space", help="operator system as space JSON")
    p.set_defaults(func=cmd_quantum)
    return ap


def _error(exc: BaseException) -> tuple[str, int]:
    for typ, code, status in ERRORS:
        if isinstance(exc, typ):
            return code, status
    return "E_INTERNAL", 70


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Report(args.output)
    try:
        args.func(args, out)
    except Exception as exc:  # every failure leaves as a coded JSON line
        code, status = _error(exc)
        err = {"error": {"code": code, "message": str(exc)}}
        if isinstance(exc, CounterexampleFound):
            err["error"]["reproduction"] = exc.path
            err["error"]["case"] = exc.case.to_json()
        sys.stderr.write(gio.dumps(err) + "\n")
        out.close()
        if status == 70:
            raise
        return status
    out.close()
    return 1 if out.failures else 0


if __name__ == "__main__":
    sys.exit(main())
