"""
Filtering domains with a grammar constraint
===========================================

A Grammar constraint over X1..Xn holds when the word they spell is in the
language.  The propagator keeps exactly the values that take part in some
such word.
"""

from gramcon import VarDomains, ZBound, cyk_propagate, parse_grammar, weighted_propagate
from gramcon.transforms import to_cnf, to_propagation_form

parens = to_cnf(parse_grammar("S -> S S\nS -> '(' S ')'\nS -> '(' ')'"))

# four free positions: only (()) and ()() fit, so the ends get fixed
d = VarDomains([set("()")] * 4, ["X1", "X2", "X3", "X4"])
print(cyk_propagate(parens, d))

# nothing fits ")(": the propagator signals this with None
print(cyk_propagate(parens, [{")"}, {"("}]))

# Weighted grammars bound the cheapest derivation.  Here each b costs one.
g = to_propagation_form(parse_grammar("S -> a S [0]\nS -> b S [1]\nS -> c [0]"))
doms = [{"a", "b"}, {"a", "b"}, {"c"}]
print(weighted_propagate(g, doms, ZBound(0, 0)))
print(weighted_propagate(g, [{"b"}, {"a", "b"}, {"c"}], ZBound(0, 5)))
