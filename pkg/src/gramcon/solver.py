"""Depth-first backtracking search with propagation to a fixpoint."""
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .automata import Nfa
from .propagators import ZBound, cyk_propagate, regular_propagate, weighted_propagate
from .transforms import to_propagation_form


@dataclass
class Constraint:
    kind: str  # 'grammar' | 'weighted' | 'regular'
    scope: tuple
    payload: object
    bound: Optional[ZBound] = None

    def run(self, sets):
        if self.kind == "regular":
            res = regular_propagate(self.payload, sets)
        elif self.kind == "grammar":
            res = cyk_propagate(self.payload, sets)
        else:
            res = weighted_propagate(self.payload, sets, self.bound)
            res = None if res is None else res[0]
        return None if res is None else res.sets


@dataclass
class Model:
    names: list = field(default_factory=list)
    domains: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    shared: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def add_variable(self, name, domain):
        self.names.append(name)
        self.domains.append(frozenset(domain))
        return len(self.names) - 1

    def _check_scope(self, scope):
        scope = tuple(scope)
        for v in scope:
            if not 0 <= v < len(self.domains):
                raise ValueError(f"scope index {v} is not a variable")
        return scope

    def add_grammar(self, scope, g):
        self.constraints.append(Constraint("grammar", self._check_scope(scope),
                                           to_propagation_form(g)))

    def add_weighted(self, scope, g, max_weight):
        self.constraints.append(Constraint("weighted", self._check_scope(scope),
                                           to_propagation_form(g), ZBound(0, max_weight)))

    def add_regular(self, scope, r):
        if not isinstance(r, Nfa):
            raise TypeError("regular constraint needs an Nfa")
        self.constraints.append(Constraint("regular", self._check_scope(scope), r))


@dataclass
class BenchResult:
    solved: bool
    satisfiable: Optional[bool]
    choice_points: int
    wall_time: float  # milliseconds
    seed: int
    solution: Optional[dict] = None


def propagate(model, domains=None):
    """Run every constraint round-robin until no domain changes.

    Returns the new domain list, or ``None`` on a wipe-out.
    """
    domains = list(model.domains if domains is None else domains)
    cons = model.constraints
    watchers = [[] for _ in domains]
    for ci, c in enumerate(cons):
        for v in set(c.scope):
            watchers[v].append(ci)
    dirty = [True] * len(cons)
    while any(dirty):
        for ci, c in enumerate(cons):
            if not dirty[ci]:
                continue
            dirty[ci] = False
            res = c.run([domains[v] for v in c.scope])
            if res is None:
                return None
            repeated = len(set(c.scope)) != len(c.scope)
            for v, new in zip(c.scope, res):
                new = domains[v] & new
                if new != domains[v]:
                    if not new:
                        return None
                    domains[v] = new
                    for cj in watchers[v]:
                        if cj != ci or repeated:
                            dirty[cj] = True
    return domains


class _Timeout(Exception):
    pass


def solve(model, seed=0, timeout_ms=60_000):
    """Find one solution with random variable and value ordering."""
    rng = random.Random(seed)
    start = time.perf_counter()
    limit = timeout_ms / 1000.0
    count = 0

    def search(domains):
        nonlocal count
        if time.perf_counter() - start >= limit:
            raise _Timeout
        domains = propagate(model, domains)
        if domains is None:
            return None
        open_vars = [v for v, d in enumerate(domains) if len(d) > 1]
        if not open_vars:
            return domains
        v = rng.choice(open_vars)
        values = sorted(domains[v], key=repr)
        rng.shuffle(values)
        for val in values:
            count += 1
            child = list(domains)
            child[v] = frozenset([val])
            found = search(child)
            if found is not None:
                return found
        return None

    try:
        found = search(model.domains)
    except _Timeout:
        elapsed = (time.perf_counter() - start) * 1000
        return BenchResult(False, None, count, elapsed, seed)
    elapsed = (time.perf_counter() - start) * 1000
    solution = None
    if found is not None:
        solution = {model.names[v]: next(iter(d)) for v, d in enumerate(found)}
    return BenchResult(True, found is not None, count, elapsed, seed, solution)
