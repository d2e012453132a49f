"""Random edit-distance instances and the two-model comparison benchmark.

Each instance constrains two sequences ``X # reverse(Y)`` and
``X' # reverse(Y')``.  X and X' avoid three consecutive ones, Y and Y' are
fixed random bit strings, both pairs must be within edit distance N, and a
share of the X positions are literally the same variables as in X'.

``conj`` posts one weighted grammar constraint per sequence built from the
intersection grammar; ``dec`` posts the plain edit grammar plus separate
Regular constraints.
"""
import csv
import io
import math
import random
import statistics
from dataclasses import dataclass

from .automata import chain_nfa, intersect, max_run_nfa
from .editdistance import SENTINEL, build_conjunction_grammar, build_edit_grammar
from .solver import Model, solve

ALPHABET = ("0", "1")
OVERLAP = 0.15
FULL_ROWS = [(15, 2), (20, 2), (25, 3), (30, 3), (35, 4), (40, 4), (45, 5), (50, 5)]
DESK_ROWS = [(15, 2), (20, 2), (25, 3)]
MODELS = ("dec", "conj")


def _random_word(rng, n):
    return "".join(rng.choice(ALPHABET) for _ in range(n))


def generate_instance(n, max_dist, seed, r1_scope="x"):
    """Build the ``(conj, dec)`` model pair for one random instance.

    ``r1_scope='x'`` applies the no-three-ones automaton to the X halves
    only; ``'both'`` applies it to the Y halves as well.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if r1_scope not in ("x", "both"):
        raise ValueError("r1_scope is 'x' or 'both'")
    rng = random.Random(seed)
    y1 = _random_word(rng, n)
    y2 = _random_word(rng, n)
    for _ in range(100):
        if y2 != y1:
            break
        y2 = _random_word(rng, n)
    shared = sorted(rng.sample(range(n), math.ceil(OVERLAP * n)))
    r1 = max_run_nfa("1", 2, ALPHABET)
    r2s = [chain_nfa(y1), chain_nfa(y2)]
    g_ed = build_edit_grammar(ALPHABET, ALPHABET)

    models = {}
    for kind in ("conj", "dec"):
        m = Model()
        xs = [m.add_variable(f"X{i + 1}", ALPHABET) for i in range(n)]
        h1 = m.add_variable("#", [SENTINEL])
        ys = [m.add_variable(f"Y{i + 1}", ALPHABET) for i in range(n)]
        xs2 = []
        for i in range(n):
            if i in shared:
                xs2.append(xs[i])
            else:
                xs2.append(m.add_variable(f"X'{i + 1}", ALPHABET))
        h2 = m.add_variable("#'", [SENTINEL])
        ys2 = [m.add_variable(f"Y'{i + 1}", ALPHABET) for i in range(n)]
        m.shared = {f"X{i + 1}": f"X'{i + 1}" for i in shared}
        m.meta = dict(n=n, max_dist=max_dist, seed=seed, y=(y1, y2), shared=shared,
                      r1_scope=r1_scope, kind=kind,
                      sequences=((xs, h1, ys), (xs2, h2, ys2)))
        for (x, h, y), r2 in zip(((xs, h1, ys), (xs2, h2, ys2)), r2s):
            z = x + [h] + y[::-1]
            if kind == "conj":
                ry = intersect(r1, r2) if r1_scope == "both" else r2
                m.add_weighted(z, build_conjunction_grammar(r1, ry, g_ed), max_dist)
            else:
                m.add_weighted(z, g_ed, max_dist)
                m.add_regular(x, r1)
                m.add_regular(y, r2)
                if r1_scope == "both":
                    m.add_regular(y, r1)
        models[kind] = m
    return models["conj"], models["dec"]


@dataclass
class BenchRow:
    n: int
    max_dist: int
    model: str
    result: object


def run_bench(rows, instances=20, timeout_ms=60_000, seed=42, models=MODELS,
              r1_scope="x", progress=None):
    """Solve ``instances`` random instances per ``(n, N)`` row under each model."""
    out = []
    for n, max_dist in rows:
        for i in range(instances):
            inst_seed = seed * 1_000_000 + n * 10_000 + max_dist * 1_000 + i
            conj, dec = generate_instance(n, max_dist, inst_seed, r1_scope)
            built = {"conj": conj, "dec": dec}
            for kind in models:
                res = solve(built[kind], seed=inst_seed, timeout_ms=timeout_ms)
                out.append(BenchRow(n, max_dist, kind, res))
                if progress:
                    progress(out[-1])
    return out


def _mean(xs):
    return statistics.fmean(xs) if xs else float("nan")


def summarize(records, models=MODELS):
    """Per row and model: solved count, mean choice points and mean seconds
    over solved instances; plus the overall totals."""
    rows = list(dict.fromkeys((r.n, r.max_dist) for r in records))
    table = {}
    for key in rows + ["total"]:
        for kind in models:
            sel = [r.result for r in records if r.model == kind
                   and (key == "total" or (r.n, r.max_dist) == key)]
            done = [r for r in sel if r.solved]
            table[key, kind] = dict(
                solved=len(done), total=len(sel),
                choice_points=_mean([r.choice_points for r in done]),
                time=_mean([r.wall_time / 1000 for r in done]),
            )
    return rows, table


_LABELS = {"dec": "ED_Dec", "conj": "ED_conj"}


def format_table(records, models=MODELS):
    rows, table = summarize(records, models)
    if not rows:
        return ""
    head = "| n | N |" + "".join(
        f" {_LABELS[k]} #solved | {_LABELS[k]} #choice points | {_LABELS[k]} time |"
        for k in models)
    lines = [head, "|---|---|" + "---|---|---|" * len(models)]
    for key in rows:
        cells = "".join(
            f" {table[key, k]['solved']} | {table[key, k]['choice_points']:.0f} | "
            f"{table[key, k]['time']:.3f} |" for k in models)
        lines.append(f"| {key[0]} | {key[1]} |{cells}")
    lines.append("")
    lines.append("| TOTALS |" + "".join(f" {_LABELS[k]} |" for k in models))
    lines.append("|---|" + "---|" * len(models))
    lines.append("| solved/total |" + "".join(
        f" {table['total', k]['solved']} / {table['total', k]['total']} |" for k in models))
    lines.append("| avg time for solved |" + "".join(
        f" {table['total', k]['time']:.3f} |" for k in models))
    lines.append("| avg choice points for solved |" + "".join(
        f" {table['total', k]['choice_points']:.0f} |" for k in models))
    return "\n".join(lines) + "\n"


CSV_COLUMNS = ["n", "N", "seed", "model", "solved", "satisfiable", "choice_points", "time_ms"]


def format_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        res = r.result
        w.writerow([r.n, r.max_dist, res.seed, r.model, res.solved, res.satisfiable,
                    res.choice_points, f"{res.wall_time:.3f}"])
    return buf.getvalue()
