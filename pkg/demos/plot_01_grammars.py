"""
Reading, normalizing and trimming grammars
==========================================

Grammars are written one production per line.  Names starting with an
uppercase letter are nonterminals, anything else (or anything quoted) is a
terminal.
"""

from gramcon import classify, enumerate_language, parse_grammar, serialize_grammar
from gramcon.transforms import to_cnf, to_linear_normal_form, trim

# balanced parentheses, quoted because '(' is not a bare word
parens = parse_grammar("""
S -> S S
S -> '(' S ')'
S -> '(' ')'
""")
print(classify(parens))
print(sorted("".join(w) for w in enumerate_language(parens, 6)))

# Chomsky form is what the table-based propagator works on
print(serialize_grammar(to_cnf(parens)))

# a linear grammar goes to A -> aB / A -> Ba / A -> a instead
lin = parse_grammar("S -> a b S c\nS -> d")
print(serialize_grammar(to_linear_normal_form(lin)))

# useless symbols disappear under trim
print(serialize_grammar(trim(parse_grammar("S -> a\nS -> B C\nC -> c\nD -> d"))))
