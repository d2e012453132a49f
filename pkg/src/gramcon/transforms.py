"""Normal forms, trimming, grammar/automaton intersection and the two
membership/intersection reductions."""
from collections import defaultdict
from typing import Hashable, NamedTuple

from .grammar import Grammar, classify


class PairedTerminal(NamedTuple):
    """Terminal ``base`` tagged with the index of the production that emits it."""

    base: Hashable
    production: int

    def __str__(self):
        return f"{self.base}/{self.production}"


class TripleNonterminal(NamedTuple):
    """Nonterminal deriving what ``nonterminal`` derives on a path ``left -> right``."""

    left: int
    nonterminal: Hashable
    right: int

    def __str__(self):
        return f"{self.nonterminal}<{self.left},{self.right}>"


class _Names:
    """Fresh nonterminal names that avoid every symbol already in use."""

    def __init__(self, g):
        self.taken = {str(s) for s in g.terminals} | {str(s) for s in g.nonterminals}

    def fresh(self, base):
        name, k = base, 1
        while name in self.taken:
            k += 1
            name = f"{base}{k}"
        self.taken.add(name)
        return name


def _dedupe(rules):
    """Merge duplicate ``(lhs, rhs)`` pairs, keeping the minimal weight."""
    best = {}
    for lhs, rhs, w in rules:
        key = (lhs, rhs)
        if key not in best or w < best[key]:
            best[key] = w
    return [(lhs, rhs, w) for (lhs, rhs), w in best.items()]


def _eliminate_units(rules, nonterminals):
    """Remove chain rules ``A -> B`` by composing them with B's other rules.

    Chain weights add along the chain, so the minimal derivation weight of
    every string is preserved.
    """
    nts = set(nonterminals)
    chains = defaultdict(list)
    others = defaultdict(list)
    order = []
    for lhs, rhs, w in rules:
        if lhs not in others:
            order.append(lhs)
            others[lhs]
        if len(rhs) == 1 and rhs[0] in nts:
            chains[lhs].append((rhs[0], w))
        else:
            others[lhs].append((rhs, w))
    if not chains:
        return list(rules)
    out = []
    for a in order:
        # cheapest chain A =>* B for each B; weights are nonnegative
        dist = {a: 0}
        frontier = [a]
        while frontier:
            nxt = []
            for b in frontier:
                for c, w in chains.get(b, ()):
                    d = dist[b] + w
                    if c not in dist or d < dist[c]:
                        dist[c] = d
                        nxt.append(c)
            frontier = nxt
        for b, d in dist.items():
            for rhs, w in others.get(b, ()):
                out.append((a, rhs, d + w))
    return _dedupe(out)


def productive_nonterminals(g):
    """Linear-time productive-symbol fixpoint (counting unresolved children)."""
    is_t = g.is_terminal
    pending = []
    users = defaultdict(list)
    productive = set()
    todo = []
    for p in g.productions:
        need = {s for s in p.rhs if not is_t(s)}
        pending.append(len(need))
        for s in need:
            users[s].append(p.index)
        if not need and p.lhs not in productive:
            productive.add(p.lhs)
            todo.append(p.lhs)
    while todo:
        a = todo.pop()
        for i in users[a]:
            pending[i] -= 1
            if pending[i] == 0:
                lhs = g.productions[i].lhs
                if lhs not in productive:
                    productive.add(lhs)
                    todo.append(lhs)
    return productive


def is_empty(g):
    return g.start not in productive_nonterminals(g)


def trim(g):
    """Drop nonproductive and unreachable nonterminals with their productions."""
    prod = productive_nonterminals(g)
    is_t = g.is_terminal
    rules = [p for p in g.productions
             if p.lhs in prod and all(is_t(s) or s in prod for s in p.rhs)]
    by_lhs = defaultdict(list)
    for p in rules:
        by_lhs[p.lhs].append(p)
    reach = {g.start}
    stack = [g.start]
    while stack:
        a = stack.pop()
        for p in by_lhs[a]:
            for s in p.rhs:
                if not is_t(s) and s not in reach:
                    reach.add(s)
                    stack.append(s)
    kept = [(p.lhs, p.rhs, p.weight) for p in rules if p.lhs in reach]
    nts = [a for a in g.nonterminals if a in reach]
    return Grammar.build(kept, start=g.start, terminals=g.terminals,
                         nonterminals=nts, weighted=g.weighted)


def _lift_terminals(g, rules, names, only_long=True):
    """Replace terminals inside right-hand sides of length >= 2 by ``Y_a``."""
    lifted = {}
    out = []
    for lhs, rhs, w in rules:
        if len(rhs) >= 2 or not only_long:
            new = []
            for s in rhs:
                if g.is_terminal(s):
                    if s not in lifted:
                        lifted[s] = names.fresh(f"Y_{s}")
                    s = lifted[s]
                new.append(s)
            rhs = tuple(new)
        out.append((lhs, rhs, w))
    out.extend((y, (a,), 0) for a, y in lifted.items())
    return out, list(lifted.values())


def to_cnf(g):
    """Chomsky form: lift terminals, binarize, then eliminate chain rules.

    Split productions keep their weight on the head rule; introduced rules
    weigh 0.  The result is trimmed.
    """
    names = _Names(g)
    rules, new_nts = _lift_terminals(g, g.rules(), names)
    binary = []
    for lhs, rhs, w in rules:
        cur = lhs
        while len(rhs) > 2:
            nxt = names.fresh(f"{lhs}_")
            new_nts.append(nxt)
            binary.append((cur, (rhs[0], nxt), w))
            w = 0
            cur, rhs = nxt, rhs[1:]
        binary.append((cur, rhs, w))
    nts = list(g.nonterminals) + new_nts
    rules = _eliminate_units(binary, nts)
    return trim(g.replace(rules, nonterminals=nts))


def _is_linear_form(g, rhs):
    if len(rhs) == 1:
        return g.is_terminal(rhs[0])
    return len(rhs) == 2 and g.is_terminal(rhs[0]) != g.is_terminal(rhs[1])


def to_linear_normal_form(g, cnf=False):
    """Rewrite a linear grammar into rules ``A -> a B``, ``A -> B a``, ``A -> a``.

    With ``cnf=True`` the terminals of two-symbol rules are further lifted
    to ``Y_a -> a`` so the result is in Chomsky form, each binary rule
    having one child that only spans a single position.
    """
    if not classify(g).is_linear:
        raise ValueError("grammar is not linear")
    names = _Names(g)
    nts = list(g.nonterminals)
    rules = _eliminate_units(g.rules(), nts)
    out = []
    for lhs, rhs, w in rules:
        cur = lhs
        while not _is_linear_form(g, rhs):
            nxt = names.fresh(f"{lhs}_")
            nts.append(nxt)
            if g.is_terminal(rhs[0]):
                out.append((cur, (rhs[0], nxt), w))
                rhs = rhs[1:]
            else:
                out.append((cur, (nxt, rhs[-1]), w))
                rhs = rhs[:-1]
            cur, w = nxt, 0
        out.append((cur, rhs, w))
    if cnf:
        out, lifted = _lift_terminals(g, out, names)
        nts += lifted
    return trim(g.replace(out, nonterminals=nts))


def _wire_start(g, r, productive, rules):
    """Fresh start with chain rules to every accepted start triple, then
    chain elimination and trimming."""
    names = _Names(g)
    names.taken |= {str(t) for t in productive}
    z = names.fresh("Z")
    for f in sorted(r.accepting):
        t = TripleNonterminal(r.initial, g.start, f)
        if t in productive:
            rules.append((z, (t,), 0))
    nts = [z] + list(productive)
    rules = _eliminate_units(rules, nts)
    return trim(Grammar.build(rules, start=z, terminals=g.terminals,
                              nonterminals=nts, weighted=g.weighted))


def _check_alphabet(g, r):
    foreign = r.alphabet - set(g.terminals)
    if foreign:
        raise ValueError(f"automaton labels outside the grammar alphabet: {sorted(map(str, foreign))}")


def triple_construction(g, r):
    """Grammar for ``L(g) & L(r)``, with ``g`` in Chomsky form.

    Triples are generated bottom-up, so only productive ones are ever
    materialized; the result is trimmed and again in Chomsky form.
    """
    if not classify(g).is_cnf:
        raise ValueError("triple construction needs a grammar in Chomsky form")
    _check_alphabet(g, r)
    by_left = defaultdict(list)
    by_right = defaultdict(list)
    for p in g.productions:
        if len(p.rhs) == 2:
            b, c = p.rhs
            by_left[b].append((p.lhs, c, p.weight))
            by_right[c].append((p.lhs, b, p.weight))
    ends_from = defaultdict(set)   # (A, F) -> {F2 : <F,A,F2> productive}
    starts_to = defaultdict(set)   # (A, F2) -> {F : <F,A,F2> productive}
    productive = {}
    rules = []
    todo = []

    def add(t):
        if t not in productive:
            productive[t] = None
            ends_from[(t.nonterminal, t.left)].add(t.right)
            starts_to[(t.nonterminal, t.right)].add(t.left)
            todo.append(t)

    for p in g.productions:
        if len(p.rhs) == 1:
            for q, q2 in r.by_label.get(p.rhs[0], ()):
                t = TripleNonterminal(q, p.lhs, q2)
                rules.append((t, p.rhs, p.weight))
                add(t)
    while todo:
        t = todo.pop()
        f, x, f2 = t
        for a, c, w in by_left[x]:
            for f3 in list(ends_from[(c, f2)]):
                head = TripleNonterminal(f, a, f3)
                rules.append((head, (t, TripleNonterminal(f2, c, f3)), w))
                add(head)
        for a, b, w in by_right[x]:
            for f0 in list(starts_to[(b, f)]):
                head = TripleNonterminal(f0, a, f2)
                rules.append((head, (TripleNonterminal(f0, b, f), t), w))
                add(head)
    rules = _dedupe(rules)
    return _wire_start(g, r, productive, rules)


def linear_triple_construction(g, r):
    """Intersection of a linear grammar in split form with an automaton.

    ``<F,A,F'> -> a <F'',B,F'>`` for each transition ``(F,a,F'')`` and
    symmetrically on the right, so only pairs of states appear and the
    result stays linear.
    """
    for p in g.productions:
        if not _is_linear_form(g, p.rhs):
            raise ValueError(f"production {p} is not in linear normal form")
    _check_alphabet(g, r)
    users = defaultdict(list)
    for p in g.productions:
        if len(p.rhs) == 2:
            if g.is_terminal(p.rhs[0]):
                users[p.rhs[1]].append((p.lhs, p.rhs[0], "L", p.weight))
            else:
                users[p.rhs[0]].append((p.lhs, p.rhs[1], "R", p.weight))
    into = defaultdict(list)   # (F'', a) -> [F]
    for q, a, q2 in sorted(r.transitions, key=repr):
        into[(q2, a)].append(q)
    productive = {}
    rules = []
    todo = []

    def add(t):
        if t not in productive:
            productive[t] = None
            todo.append(t)

    for p in g.productions:
        if len(p.rhs) == 1:
            for q, q2 in r.by_label.get(p.rhs[0], ()):
                t = TripleNonterminal(q, p.lhs, q2)
                rules.append((t, p.rhs, p.weight))
                add(t)
    while todo:
        t = todo.pop()
        f, x, f2 = t
        for a, term, side, w in users[x]:
            if side == "L":
                for f0 in into.get((f, term), ()):
                    head = TripleNonterminal(f0, a, f2)
                    rules.append((head, (term, t), w))
                    add(head)
            else:
                for f3 in r.delta.get((f2, term), ()):
                    head = TripleNonterminal(f, a, f3)
                    rules.append((head, (t, term), w))
                    add(head)
    rules = _dedupe(rules)
    return _wire_start(g, r, productive, rules)


def simple_grammar_reduction(g, s):
    """Tag every leading terminal with its production index.

    Returns the tagged grammar (simple by construction) and per-position
    domains holding the tagged copies of ``s[i]``.
    """
    from .propagators import VarDomains

    if not classify(g).is_greibach:
        raise ValueError("grammar is not in Greibach form")
    s = list(s)
    if not s:
        raise ValueError("string must be nonempty")
    foreign = [a for a in s if not g.is_terminal(a)]
    if foreign:
        raise ValueError(f"symbols not in the grammar alphabet: {foreign}")
    rules = []
    paired = []
    for p in g.productions:
        t = PairedTerminal(p.rhs[0], p.index)
        paired.append(t)
        rules.append((p.lhs, (t,) + p.rhs[1:], p.weight))
    g2 = Grammar.build(rules, start=g.start, terminals=paired,
                       nonterminals=g.nonterminals, weighted=g.weighted)
    domains = VarDomains([{t for t in paired if t.base == a} for a in s])
    return g2, domains


def bitmap_reduction(g, domains):
    """Encode a product of domains as one bitmap string over ``{0, 1}``.

    Each terminal ``a`` (index j, 1-based in ``g.terminals`` order) becomes a
    block nonterminal ``T_j -> B^(j-1) 1 B^(|T|-j)``; the returned string
    concatenates, per position, the bitmap of the allowed terminals.
    """
    for p in g.productions:
        if not g.is_terminal(p.rhs[0]):
            raise ValueError(f"production {p} does not start with a terminal")
    domains = [set(d) for d in domains]
    terms = list(g.terminals)
    for d in domains:
        foreign = d - set(terms)
        if foreign:
            raise ValueError(f"domain values outside the grammar alphabet: {foreign}")
    names = _Names(g)
    names.taken |= {"0", "1"}
    b = names.fresh("B")
    blocks = {a: names.fresh(f"T{j}") for j, a in enumerate(terms, 1)}
    k = len(terms)
    rules = [(b, ("0",), 0), (b, ("1",), 0)]
    for j, a in enumerate(terms, 1):
        rules.append((blocks[a], (b,) * (j - 1) + ("1",) + (b,) * (k - j), 0))
    for p in g.productions:
        rhs = tuple(blocks[x] if g.is_terminal(x) else x for x in p.rhs)
        rules.append((p.lhs, rhs, p.weight))
    nts = list(g.nonterminals) + [b] + list(blocks.values())
    g2 = Grammar.build(rules, start=g.start, terminals=("0", "1"),
                       nonterminals=nts, weighted=g.weighted)
    s = "".join("1" if a in d else "0" for d in domains for a in terms)
    return g2, s


def to_propagation_form(g):
    """Chomsky form suited to the propagators.

    Linear grammars go through the linear normal form so every binary rule
    has a single-position child and the quadratic table path applies.
    """
    cls = classify(g)
    if cls.is_linear:
        return to_linear_normal_form(g, cnf=True)
    if cls.is_cnf:
        return g
    return to_cnf(g)
