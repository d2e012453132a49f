"""
Two reductions between parsing and propagation
==============================================

The first turns a membership question into a propagation question over a
simple (deterministic) grammar.  The second goes the other way and turns
"does any word over these domains parse?" into one membership test.
"""

from gramcon import cartesian_nfa, cyk_parse, parse_grammar, serialize_grammar
from gramcon.transforms import (bitmap_reduction, is_empty, simple_grammar_reduction, to_cnf,
                                triple_construction)

g = parse_grammar("S -> a S B\nS -> b\nB -> b")

# Pairing each terminal with the production that emits it makes the grammar simple
g2, doms = simple_grammar_reduction(g, "abb")
print(serialize_grammar(g2))
print([sorted(map(str, d)) for d in doms])
print("support:", not is_empty(triple_construction(to_cnf(g2), cartesian_nfa(doms))))
print("member: ", cyk_parse(to_cnf(g), "abb"))

# Each position becomes a block of bits, one per terminal
g3, bits = bitmap_reduction(g, [{"a", "b"}, {"b"}, {"b"}])
print(bits, cyk_parse(to_cnf(g3), bits))
