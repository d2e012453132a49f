"""Propagators and constructions for grammar-based global constraints."""
from .automata import Nfa, cartesian_nfa, chain_nfa
from .editdistance import (EditInstance, build_conjunction_grammar, build_edit_grammar,
                           encode_edit_instance)
from .grammar import Grammar, GrammarClass, Production, classify, enumerate_language, \
    parse_grammar, serialize_grammar
from .propagators import (CykTable, VarDomains, ZBound, brute_force_propagate, cyk_parse,
                          cyk_propagate, min_weight_parse, regular_propagate,
                          weighted_propagate)
from .solver import BenchResult, Model, solve
from .transforms import (bitmap_reduction, is_empty, simple_grammar_reduction, to_cnf,
                         to_linear_normal_form, triple_construction, trim)

__version__ = "0.1.0"
