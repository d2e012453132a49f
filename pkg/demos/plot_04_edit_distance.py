"""
Edit distance as a weighted grammar
===================================

Lay out X, a separator, then Y backwards.  Matching symbols are peeled off
the two ends for free; every substitution, insertion or deletion costs one.
"""

from gramcon import (EditInstance, build_conjunction_grammar, build_edit_grammar,
                     encode_edit_instance, min_weight_parse, weighted_propagate)
from gramcon.automata import chain_nfa, max_run_nfa
from gramcon.transforms import to_propagation_form

g_ed = build_edit_grammar("01", "01")
cnf = to_propagation_form(g_ed)
for x, y in [("0110", "0110"), ("0110", "010"), ("111", "000")]:
    print(x, y, min_weight_parse(cnf, list(x) + ["#"] + list(y[::-1])))

# X is free, Y is 1101, and the two must be within distance 1
inst = EditInstance(4, ("0", "1"), ("0", "1"), 1)
d, z = encode_edit_instance(inst, [{"0", "1"}] * 4, [{"1"}, {"1"}, {"0"}, {"1"}])
print(weighted_propagate(cnf, d, z))

# Fold "no 111 in X" and "Y is 1101" into the grammar.  With X = ?11? the
# plain edit grammar still sees candidates, but every X within distance 1
# of 1101 either breaks the 111 rule or disagrees on the fixed ones, and
# the folded grammar detects that on its own.
both = to_propagation_form(build_conjunction_grammar(max_run_nfa("1", 2, "01"),
                                                     chain_nfa("1101"), g_ed))
d, z = encode_edit_instance(inst, [{"0", "1"}, {"1"}, {"1"}, {"0", "1"}], [{"0", "1"}] * 4)
print(weighted_propagate(cnf, d, z))
print(weighted_propagate(both, d, z))
