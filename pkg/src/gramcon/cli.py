"""Command line entry point: ``gramcon <subcommand> ...``."""
import argparse
import json
import sys
from pathlib import Path

from .automata import Nfa, universal_nfa
from .bench import DESK_ROWS, format_csv, format_table, run_bench
from .editdistance import (EditInstance, build_conjunction_grammar, build_edit_grammar,
                           encode_edit_instance)
from .grammar import parse_grammar, serialize_grammar
from .propagators import VarDomains, ZBound, cyk_propagate, weighted_propagate
from .solver import Model, propagate
from .transforms import (bitmap_reduction, simple_grammar_reduction, to_cnf,
                         to_linear_normal_form, to_propagation_form, trim)


def _read_grammar(path):
    return parse_grammar(Path(path).read_text(encoding="utf-8"))


def _read_domains(path):
    return VarDomains.from_json(Path(path).read_text(encoding="utf-8"))


def _read_nfa(path):
    return Nfa.from_json(Path(path).read_text(encoding="utf-8"))


def _split_string(s):
    return s.split() if " " in s else list(s)


def cmd_transform(args):
    g = _read_grammar(args.grammar)
    conv = {"cnf": to_cnf, "linear-nf": to_linear_normal_form, "trim": trim}[args.to]
    sys.stdout.write(serialize_grammar(conv(g)))


def cmd_reduce(args):
    g = _read_grammar(args.grammar)
    if args.mode == "thm1":
        if args.string is None:
            raise SystemExit("thm1 needs --string")
        g2, doms = simple_grammar_reduction(g, _split_string(args.string))
        sys.stdout.write(serialize_grammar(g2))
        named = VarDomains([[str(v) for v in d] for d in doms],
                           [f"X{i}" for i in range(1, len(doms) + 1)])
        print("# domains: " + json.dumps(named.to_json()))
    else:
        if args.domains is None:
            raise SystemExit("thm2 needs --domains")
        g2, bits = bitmap_reduction(g, _read_domains(args.domains))
        sys.stdout.write(serialize_grammar(g2))
        print(f"# bitmap: {bits}")


def cmd_propagate(args):
    g = _read_grammar(args.grammar)
    d = _read_domains(args.domains)
    pg = to_propagation_form(g)
    out = {}
    if g.weighted or args.ub_z is not None:
        ub = float("inf") if args.ub_z is None else args.ub_z
        res = weighted_propagate(pg, d, ZBound(0, ub), args.linear_fast_path)
        if res is not None:
            doms, z = res
            out = doms.to_json(order=d)
            out["lb_z"] = z.lb
    else:
        res = cyk_propagate(pg, d, args.linear_fast_path)
        if res is not None:
            out = res.to_json(order=d)
    out["status"] = "disentailed" if res is None else "ok"
    print(json.dumps(out))


def cmd_editdist(args):
    dx, dy = _read_domains(args.x_domains), _read_domains(args.y_domains)
    ax = sorted({v for d in dx for v in d})
    ay = sorted({v for d in dy for v in d})
    inst = EditInstance(len(dx), tuple(ax), tuple(ay), args.max_dist)
    z, bound = encode_edit_instance(inst, dx, dy)
    g_ed = build_edit_grammar(ax, ay)
    r1 = _read_nfa(args.r1) if args.r1 else universal_nfa(ax)
    r2 = _read_nfa(args.r2) if args.r2 else universal_nfa(ay)
    m = Model()
    zs = [m.add_variable(name, dom) for name, dom in zip(z.names, z.sets)]
    n = inst.n
    xs, ys = zs[:n], zs[n + 1:][::-1]
    if args.mode == "conj":
        m.add_weighted(zs, build_conjunction_grammar(r1, r2, g_ed), args.max_dist)
    else:
        m.add_weighted(zs, g_ed, args.max_dist)
        m.add_regular(xs, r1)
        m.add_regular(ys, r2)
    res = propagate(m)
    if res is None:
        print(json.dumps({"status": "disentailed"}))
        return
    outx = VarDomains([res[v] for v in xs], dx.names).to_json(order=dx)
    outy = VarDomains([res[v] for v in ys], dy.names).to_json(order=dy)
    print(json.dumps({"x": outx, "y": outy, "status": "ok"}))


def _parse_rows(text):
    rows = []
    for part in text.split(","):
        n, big_n = part.strip().split(":")
        rows.append((int(n), int(big_n)))
    return rows


def cmd_bench(args):
    rows = _parse_rows(args.rows) if args.rows else []
    models = tuple(m.strip() for m in args.models.split(","))

    def progress(rec):
        r = rec.result
        print(f"n={rec.n} N={rec.max_dist} {rec.model} seed={r.seed} solved={r.solved} "
              f"sat={r.satisfiable} cp={r.choice_points} {r.wall_time:.0f}ms",
              file=sys.stderr)

    records = run_bench(rows, args.instances, args.timeout_ms, args.seed, models,
                        args.r1_scope, progress if args.verbose else None)
    table = format_table(records, models)
    if args.out:
        out = Path(args.out)
        out.write_text(table, encoding="utf-8")
        csv_path = Path(args.csv) if args.csv else out.with_suffix(".csv")
        csv_path.write_text(format_csv(records), encoding="utf-8")
    else:
        sys.stdout.write(table)
        if args.csv:
            Path(args.csv).write_text(format_csv(records), encoding="utf-8")


def build_parser():
    p = argparse.ArgumentParser(prog="gramcon", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="normal-form conversion or trimming")
    t.add_argument("--grammar", required=True)
    t.add_argument("--to", required=True, choices=["cnf", "linear-nf", "trim"])
    t.set_defaults(func=cmd_transform)

    r = sub.add_parser("reduce", help="membership and bitmap reductions")
    r.add_argument("--grammar", required=True)
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--string")
    src.add_argument("--domains")
    r.add_argument("--mode", required=True, choices=["thm1", "thm2"])
    r.set_defaults(func=cmd_reduce)

    pr = sub.add_parser("propagate", help="filter domains for one grammar constraint")
    pr.add_argument("--grammar", required=True)
    pr.add_argument("--domains", required=True)
    pr.add_argument("--ub-z", type=int, default=None)
    pr.add_argument("--linear-fast-path", choices=["auto", "on", "off"], default="auto")
    pr.set_defaults(func=cmd_propagate)

    e = sub.add_parser("editdist", help="filter an edit distance constraint")
    e.add_argument("--x-domains", required=True)
    e.add_argument("--y-domains", required=True)
    e.add_argument("--max-dist", type=int, required=True)
    e.add_argument("--r1")
    e.add_argument("--r2")
    e.add_argument("--mode", choices=["conj", "dec"], default="conj")
    e.set_defaults(func=cmd_editdist)

    b = sub.add_parser("bench", help="compare the two edit distance models")
    b.add_argument("--rows", default=",".join(f"{n}:{k}" for n, k in DESK_ROWS))
    b.add_argument("--instances", type=int, default=20)
    b.add_argument("--timeout-ms", type=int, default=60_000)
    b.add_argument("--seed", type=int, default=42)
    b.add_argument("--models", default="conj,dec")
    b.add_argument("--r1-scope", choices=["x", "both"], default="x")
    b.add_argument("--out")
    b.add_argument("--csv")
    b.add_argument("-v", "--verbose", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0
