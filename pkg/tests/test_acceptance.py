"""Acceptance suite: one pass/fail line per criterion, printed at the end of the run.

Every test records its verdict through the ``report`` fixture before
asserting, so the summary lists failures as well as passes.
"""
import math
import random
import statistics
import time

from gramcon.automata import cartesian_nfa
from gramcon.bench import DESK_ROWS, generate_instance, run_bench, summarize
from gramcon.editdistance import build_edit_grammar
from gramcon.grammar import enumerate_language, parse_grammar
from gramcon.propagators import (ZBound, brute_force_propagate, cyk_parse, cyk_propagate,
                                 min_weight_parse, weighted_propagate)
from gramcon.solver import Model, propagate
from gramcon.transforms import (bitmap_reduction, is_empty, simple_grammar_reduction, to_cnf,
                                to_linear_normal_form, to_propagation_form, triple_construction,
                                trim)

from oracles import (cnf_corpus, random_domains, random_greibach, random_leading_terminal,
                     random_linear, wagner_fischer)


def record(report, num, title, ok, detail):
    report(f"[{'PASS' if ok else 'FAIL'}] {num}. {title}: {detail}")


def test_c1_dc_oracle_equivalence(report):
    t0 = time.perf_counter()
    corpus = cnf_corpus(200, seed=1)
    bad = [i for i, (g, d) in enumerate(corpus)
           if cyk_propagate(g, d) != brute_force_propagate(g, d)]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    record(report, 1, "DC oracle equivalence", ok,
           f"{len(corpus) - len(bad)}/{len(corpus)} agree in {elapsed:.1f}s (limit 60s)")
    assert ok, bad[:5]


def test_c2_linear_fast_path(report):
    rng = random.Random(2)
    total = bad = 0
    for _ in range(200):
        g = to_linear_normal_form(random_linear(rng, weighted=rng.random() < 0.5), cnf=True)
        d = random_domains(rng, list(g.terminals), rng.randint(1, 6))
        z = ZBound(0, rng.choice([0, 1, 3, float("inf")]))
        total += 1
        if (cyk_propagate(g, d, "on") != cyk_propagate(g, d, "off")
                or weighted_propagate(g, d, z, "on") != weighted_propagate(g, d, z, "off")):
            bad += 1
    record(report, 2, "linear fast path equals general path", bad == 0,
           f"{total - bad}/{total} identical")
    assert bad == 0


def test_c3_membership_reduction(report):
    rng = random.Random(3)
    agree = members = 0
    for _ in range(100):
        g = random_greibach(rng)
        lang = sorted(enumerate_language(g, 6))
        if lang and rng.random() < 0.5:
            s = rng.choice(lang)
        else:
            s = tuple(rng.choice(g.terminals) for _ in range(rng.randint(1, 8)))
        g2, doms = simple_grammar_reduction(g, s)
        supported = not is_empty(trim(triple_construction(to_cnf(g2), cartesian_nfa(doms))))
        member = cyk_parse(to_cnf(g), s)
        members += member
        agree += supported == member
    record(report, 3, "simple-grammar membership reduction", agree == 100,
           f"{agree}/100 agree ({members} members)")
    assert agree == 100


def test_c4_bitmap_reduction(report):
    rng = random.Random(4)
    agree = nonempty_count = 0
    for _ in range(100):
        g = random_leading_terminal(rng, max_terms=3)
        d = random_domains(rng, list(g.terminals), rng.randint(1, 5))
        g2, bits = bitmap_reduction(g, d)
        nonempty = not is_empty(trim(triple_construction(to_cnf(g), cartesian_nfa(d))))
        nonempty_count += nonempty
        agree += cyk_parse(to_cnf(g2), bits) == nonempty
    record(report, 4, "bitmap intersection reduction", agree == 100,
           f"{agree}/100 agree ({nonempty_count} nonempty)")
    assert agree == 100


def test_c5_edit_distance_exact(report):
    rng = random.Random(5)
    grammars = {}
    agree = 0
    for _ in range(500):
        k = rng.randint(2, 4)
        alpha = "abcd"[:k]
        x = "".join(rng.choice(alpha) for _ in range(rng.randint(0, 12)))
        y = "".join(rng.choice(alpha) for _ in range(rng.randint(0, 12)))
        if k not in grammars:
            grammars[k] = to_propagation_form(build_edit_grammar(alpha, alpha))
        w = min_weight_parse(grammars[k], list(x) + ["#"] + list(y[::-1]))
        agree += w == wagner_fischer(x, y)
    record(report, 5, "edit distance exactness", agree == 500, f"{agree}/500 exact")
    assert agree == 500


def test_c6_conjunction_strength(report):
    rng = random.Random(6)
    ok_count = 0
    strictly = 0
    for i in range(50):
        n = rng.randint(2, 10)
        conj, dec = generate_instance(n, rng.randint(1, 3), seed=6000 + i)
        # fix a few X positions the same way in both models
        start = list(conj.domains)
        xs = conj.meta["sequences"][0][0]
        for v in rng.sample(xs, rng.randint(0, n // 3)):
            start[v] = frozenset([rng.choice("01")])
        good = True
        for k in range(2):
            c = conj.constraints[k]
            out = c.run([start[v] for v in c.scope])
            sub = dec.constraints[3 * k:3 * k + 3]
            dec_one = Model(dec.names, start, sub)
            fix = propagate(dec_one)
            if fix is None:
                good &= out is None
                continue
            if out is None:
                strictly += 1
                continue
            dec_doms = [fix[v] for v in c.scope]
            good &= all(a <= b for a, b in zip(out, dec_doms))
            strictly += any(a < b for a, b in zip(out, dec_doms))
        ok_count += good
    record(report, 6, "conjunction prunes at least as much as decomposition", ok_count == 50,
           f"{ok_count}/50 subset-or-equal ({strictly} sequences strictly stronger)")
    assert ok_count == 50


def _slope(ns, ts):
    return statistics.linear_regression([math.log(n) for n in ns],
                                        [math.log(t) for t in ts]).slope


def test_c7_scaling(report):
    # a^i c b^j with i >= j: linear, and every length has strings
    g = to_propagation_form(parse_grammar("S -> a S b\nS -> a S\nS -> c"))
    ns = [64, 128, 256, 512]
    t0 = time.perf_counter()
    times = {"on": [], "off": []}
    for n in ns:
        d = [set("abc")] * n
        for mode, reps in (("on", 3), ("off", 1)):
            best = float("inf")
            for _ in range(reps):
                t = time.perf_counter()
                cyk_propagate(g, d, mode)
                best = min(best, time.perf_counter() - t)
            times[mode].append(best)
    elapsed = time.perf_counter() - t0
    lin, gen = _slope(ns, times["on"]), _slope(ns, times["off"])
    ok = lin <= 2.5 and gen >= lin and elapsed < 300
    record(report, 7, "propagator scaling", ok,
           f"linear slope {lin:.2f} (<= 2.5), general slope {gen:.2f}, {elapsed:.0f}s total")
    assert ok


def test_c8_bench_trend(report):
    t0 = time.perf_counter()
    records = run_bench(DESK_ROWS, instances=20, timeout_ms=60_000, seed=42)
    elapsed = time.perf_counter() - t0
    rows, table = summarize(records)
    by_key = {}
    for r in records:
        by_key.setdefault((r.n, r.max_dist, r.result.seed), {})[r.model] = r.result
    disagree = sum(1 for pair in by_key.values()
                   if pair["conj"].solved and pair["dec"].solved
                   and pair["conj"].satisfiable != pair["dec"].satisfiable)
    ok_a = disagree == 0
    ok_b = all(table[key, "conj"]["choice_points"] <= table[key, "dec"]["choice_points"]
               for key in rows if key[0] in (20, 25))
    ok_c = all(table[key, "conj"]["solved"] >= table[key, "dec"]["solved"] for key in rows)
    detail = "; ".join(
        f"n={n},N={k}: conj {table[(n, k), 'conj']['solved']}/20 solved "
        f"{table[(n, k), 'conj']['choice_points']:.0f} cp, dec "
        f"{table[(n, k), 'dec']['solved']}/20 solved {table[(n, k), 'dec']['choice_points']:.0f} cp"
        for n, k in rows)
    ok = ok_a and ok_b and ok_c
    record(report, 8, "benchmark trend", ok,
           f"agreement={ok_a} fewer-choice-points={ok_b} solved>={ok_c} "
           f"in {elapsed / 60:.1f} min [{detail}]")
    assert ok


def test_c9_triple_construction_agrees_with_cyk(report):
    corpus = cnf_corpus(200, seed=1)
    agree = 0
    for g, d in corpus:
        nonempty = not is_empty(trim(triple_construction(g, cartesian_nfa(d))))
        agree += nonempty == (cyk_propagate(g, d) is not None)
    record(report, 9, "triple construction agrees with CYK", agree == len(corpus),
           f"{agree}/{len(corpus)} agree")
    assert agree == len(corpus)
