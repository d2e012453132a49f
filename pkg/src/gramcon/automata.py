"""Epsilon-free nondeterministic finite automata."""
import json
from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class Nfa:
    """States are ``0 .. n_states-1``; transitions are ``(q, label, q2)`` triples."""

    n_states: int
    initial: int
    accepting: frozenset
    transitions: frozenset

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", frozenset(map(tuple, self.transitions)))
        ok = range(self.n_states)
        if self.initial not in ok:
            raise ValueError(f"initial state {self.initial} undeclared")
        for q in self.accepting:
            if q not in ok:
                raise ValueError(f"accepting state {q} undeclared")
        for q, _, q2 in self.transitions:
            if q not in ok or q2 not in ok:
                raise ValueError(f"transition endpoint outside 0..{self.n_states - 1}")

    @cached_property
    def alphabet(self):
        return frozenset(a for _, a, _ in self.transitions)

    @cached_property
    def delta(self):
        """``{(q, a): [q2, ...]}``, sorted for deterministic iteration."""
        out = {}
        for q, a, q2 in sorted(self.transitions, key=repr):
            out.setdefault((q, a), []).append(q2)
        return out

    @cached_property
    def by_label(self):
        out = {}
        for q, a, q2 in sorted(self.transitions, key=repr):
            out.setdefault(a, []).append((q, q2))
        return out

    def step(self, states, a):
        delta = self.delta
        return {q2 for q in states for q2 in delta.get((q, a), ())}

    def accepts(self, s):
        cur = {self.initial}
        for a in s:
            cur = self.step(cur, a)
            if not cur:
                return False
        return bool(cur & self.accepting)

    def reverse(self):
        """Automaton for the reversed language, using one fresh initial state."""
        fresh = self.n_states
        trans = {(q2, a, q) for q, a, q2 in self.transitions}
        for q, a, f in self.transitions:
            if f in self.accepting:
                trans.add((fresh, a, q))
        accepting = {self.initial}
        if self.initial in self.accepting:
            accepting.add(fresh)
        return Nfa(self.n_states + 1, fresh, accepting, trans)

    def to_json(self):
        return {
            "states": self.n_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": sorted([list(t) for t in self.transitions], key=repr),
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["states"], obj["initial"], frozenset(obj["accepting"]),
                   frozenset(tuple(t) for t in obj["transitions"]))


def concat_with_separator(first, sep, second):
    """Automaton for ``L(first) sep L(second)`` glued without epsilon moves."""
    off = first.n_states
    trans = set(first.transitions)
    trans |= {(q + off, a, q2 + off) for q, a, q2 in second.transitions}
    trans |= {(f, sep, second.initial + off) for f in first.accepting}
    return Nfa(first.n_states + second.n_states, first.initial,
               {f + off for f in second.accepting}, trans)


def intersect(r1, r2):
    """Product automaton restricted to pairs reachable from the initial pair."""
    index = {(r1.initial, r2.initial): 0}
    todo = [(r1.initial, r2.initial)]
    trans = set()
    while todo:
        p, q = todo.pop()
        src = index[(p, q)]
        for (p0, a), p2s in r1.delta.items():
            if p0 != p:
                continue
            for q2 in r2.delta.get((q, a), ()):
                for p2 in p2s:
                    if (p2, q2) not in index:
                        index[(p2, q2)] = len(index)
                        todo.append((p2, q2))
                    trans.add((src, a, index[(p2, q2)]))
    accepting = {i for (p, q), i in index.items() if p in r1.accepting and q in r2.accepting}
    return Nfa(len(index), 0, accepting, trans)


def cartesian_nfa(domains):
    """Layered automaton accepting exactly the position-wise product of ``domains``."""
    domains = list(domains)
    trans = {(i, a, i + 1) for i, d in enumerate(domains) for a in d}
    return Nfa(len(domains) + 1, 0, {len(domains)}, trans)


def chain_nfa(word):
    """Automaton accepting exactly ``word``."""
    word = list(word)
    return Nfa(len(word) + 1, 0, {len(word)},
               {(i, a, i + 1) for i, a in enumerate(word)})


def universal_nfa(alphabet):
    return Nfa(1, 0, {0}, {(0, a, 0) for a in alphabet})


def empty_nfa():
    return Nfa(1, 0, frozenset(), frozenset())


def max_run_nfa(symbol, max_run, alphabet):
    """Strings with no more than ``max_run`` consecutive copies of ``symbol``.

    State ``k`` counts the current trailing run; every state accepts.
    """
    trans = set()
    for k in range(max_run + 1):
        for a in alphabet:
            if a == symbol:
                if k < max_run:
                    trans.add((k, a, k + 1))
            else:
                trans.add((k, a, 0))
    return Nfa(max_run + 1, 0, set(range(max_run + 1)), trans)
