"""Edit distance as a weighted linear grammar over ``X # reverse(Y)``.

Matching pairs are parsed from the outside in with weight 0; substitutions,
insertions and deletions cost 1.  The cost of the cheapest parse of
``x#reverse(y)`` is the unit-cost edit distance between ``x`` and ``y``.
"""
from dataclasses import dataclass

from .automata import concat_with_separator
from .grammar import Grammar
from .propagators import VarDomains, ZBound
from .transforms import linear_triple_construction, to_linear_normal_form

SENTINEL = "#"


@dataclass(frozen=True)
class EditInstance:
    n: int
    alphabet_x: tuple
    alphabet_y: tuple
    max_dist: int
    sentinel: str = SENTINEL

    def __post_init__(self):
        if self.sentinel in self.alphabet_x or self.sentinel in self.alphabet_y:
            raise ValueError(f"sentinel {self.sentinel!r} occurs in an alphabet")

    @property
    def m(self):
        return self.n


def build_edit_grammar(alphabet_x, alphabet_y, sentinel=SENTINEL):
    """The weighted linear grammar G_ed.

    Insertion and deletion rules are emitted for every symbol of either
    alphabet so that asymmetric alphabets still give exact distances.
    """
    dx = list(dict.fromkeys(alphabet_x))
    dy = list(dict.fromkeys(alphabet_y))
    if sentinel in dx or sentinel in dy:
        raise ValueError(f"sentinel {sentinel!r} occurs in an alphabet")
    both = list(dict.fromkeys(dx + dy))
    rules = [("S", (d, "S", d), 0) for d in both]
    rules += [("S", (a, "S", b), 1) for a in dx for b in dy if a != b]
    for d in both:
        rules += [("S", (d, "S"), 1), ("S", ("S", d), 1)]
    rules.append(("S", (sentinel,), 0))
    return Grammar.build(rules, start="S", terminals=both + [sentinel],
                         nonterminals=["S"], weighted=True)


def encode_edit_instance(inst, dx, dy):
    """Lay out ``X, #, reverse(Y)`` as one sequence of 2n+1 domains."""
    dx, dy = list(dx), list(dy)
    if len(dx) != inst.n or len(dy) != inst.n:
        raise ValueError(f"expected {inst.n} domains for X and Y, got {len(dx)} and {len(dy)}")
    sets = dx + [{inst.sentinel}] + dy[::-1]
    names = ([f"X{i}" for i in range(1, inst.n + 1)] + [inst.sentinel]
             + [f"Y{i}" for i in range(inst.n, 0, -1)])
    return VarDomains(sets, names), ZBound(0, inst.max_dist)


def conjunction_automaton(r1, r2, sentinel=SENTINEL):
    """Automaton for ``L(r1) # reverse(L(r2))``."""
    return concat_with_separator(r1, sentinel, r2.reverse())


def build_conjunction_grammar(r1, r2, g_ed, sentinel=SENTINEL):
    """Weighted linear grammar for edit distance conjoined with Regular(X, r1)
    and Regular(Y, r2), via the pairwise-state triple construction."""
    aut = conjunction_automaton(r1, r2, sentinel)
    return linear_triple_construction(to_linear_normal_form(g_ed), aut)
