"""Domain-consistency propagators for Grammar, WeightedCFG and Regular constraints.

Every propagator is a pure function: it takes domains and returns fresh,
possibly smaller domains, or ``None`` when the constraint is disentailed.
"""
import itertools
import json
import math
from dataclasses import dataclass

from .grammar import classify

INF = math.inf
BRUTE_FORCE_LIMIT = 2_000_000


class VarDomains:
    """Ordered per-variable value sets (the scope of a constraint)."""

    __slots__ = ("sets", "names", "ordered")

    def __init__(self, sets, names=None):
        self.sets = tuple(frozenset(d) for d in sets)
        self.names = tuple(names) if names is not None else None
        self.ordered = None
        if self.names is not None and len(self.names) != len(self.sets):
            raise ValueError("one name per variable")

    def __len__(self):
        return len(self.sets)

    def __getitem__(self, i):
        return self.sets[i]

    def __iter__(self):
        return iter(self.sets)

    def __eq__(self, other):
        if isinstance(other, VarDomains):
            return self.sets == other.sets
        return NotImplemented

    def __hash__(self):
        return hash(self.sets)

    def __repr__(self):
        body = ", ".join("{" + ",".join(sorted(map(str, d))) + "}" for d in self.sets)
        return f"VarDomains([{body}])"

    @property
    def is_failed(self):
        return any(not d for d in self.sets)

    def issubset(self, other):
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))

    def size(self):
        return math.prod(len(d) for d in self.sets)

    def to_json(self, order=None):
        """Domain-file object; ``order`` (a VarDomains) fixes value order."""
        names = self.names or tuple(f"X{i}" for i in range(1, len(self) + 1))
        out = []
        for k, (name, d) in enumerate(zip(names, self.sets)):
            if order is not None:
                vals = [v for v in order.ordered[k] if v in d]
            else:
                vals = sorted(d, key=str)
            out.append({"name": name, "domain": vals})
        return {"vars": out}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        specs = obj["vars"]
        d = cls([v["domain"] for v in specs], [v["name"] for v in specs])
        d.ordered = [list(dict.fromkeys(v["domain"])) for v in specs]
        return d


def as_domains(d):
    return d if isinstance(d, VarDomains) else VarDomains(d)


@dataclass(frozen=True)
class ZBound:
    """Bounds of the cost variable of a WeightedCFG constraint."""

    lb: float = 0
    ub: float = INF

    @property
    def is_failed(self):
        return self.lb > self.ub


class _Compiled:
    """Integer-indexed view of a Chomsky-form grammar for table filling."""

    def __init__(self, g, weighted):
        if not classify(g).is_cnf:
            raise ValueError("propagator needs a grammar in Chomsky form")
        self.nts = list(g.nonterminals)
        idx = {a: i for i, a in enumerate(self.nts)}
        self.start = idx[g.start]
        k = len(self.nts)
        self.term_rules = {}
        binary = []
        has_binary = [False] * k
        for p in g.productions:
            w = p.weight if weighted else 0
            a = idx[p.lhs]
            if len(p.rhs) == 1:
                self.term_rules.setdefault(p.rhs[0], []).append((a, w))
            else:
                binary.append((a, idx[p.rhs[0]], idx[p.rhs[1]], w))
                has_binary[a] = True
        # nonterminals that only ever span a single position
        unit = [not has_binary[a] for a in range(k)]
        self.by_left = [[] for _ in range(k)]
        self.by_lhs = [[] for _ in range(k)]
        self.left_unit = [[] for _ in range(k)]
        self.right_unit = [[] for _ in range(k)]
        self.lin_by_lhs = [[] for _ in range(k)]
        self.linear_ok = True
        for a, b, c, w in binary:
            self.by_left[b].append((a, c, w))
            self.by_lhs[a].append((b, c, w))
            if unit[b]:
                self.left_unit[c].append((a, b, w))
                self.lin_by_lhs[a].append((True, b, c, w))
            elif unit[c]:
                self.right_unit[b].append((a, c, w))
                self.lin_by_lhs[a].append((False, c, b, w))
            else:
                self.linear_ok = False


def _compiled(g, weighted):
    memo = g._memo
    key = ("compiled", weighted)
    if key not in memo:
        memo[key] = _Compiled(g, weighted)
    return memo[key]


def _relax(cell, a, w):
    old = cell.get(a)
    if old is None or w < old:
        cell[a] = w


class CykTable:
    """Inside/outside table over the current domains.

    ``inside[l][i]`` maps nonterminal ids derivable on positions
    ``i .. i+l-1`` (0-based internally) to their minimal derivation weight;
    entries heavier than the bound are dropped.  ``outside`` holds the
    cheapest completion to a full derivation, only for reachable entries.
    Public accessors use 1-based start positions.
    """

    def __init__(self, g, domains, ub=INF, weighted=True, linear="auto"):
        cg = _compiled(g, weighted)
        if linear in ("auto", None):
            linear = cg.linear_ok
        elif linear in (True, "on") and not cg.linear_ok:
            raise ValueError("grammar has a binary rule without a single-position child")
        elif linear == "off":
            linear = False
        self.grammar = g
        self.cg = cg
        self.sets = as_domains(domains).sets
        self.n = len(self.sets)
        if self.n == 0:
            raise ValueError("constraint over zero variables")
        self.ub = ub
        self.linear = bool(linear)
        self._index = {a: i for i, a in enumerate(cg.nts)}
        self._fill_inside()
        self._fill_outside()

    def _fill_inside(self):
        cg, n, ub = self.cg, self.n, self.ub
        ins = [None] + [[{} for _ in range(n - l + 1)] for l in range(1, n + 1)]
        row = ins[1]
        for i, d in enumerate(self.sets):
            cell = row[i]
            for v in d:
                for a, w in cg.term_rules.get(v, ()):
                    if w <= ub:
                        _relax(cell, a, w)
        if self.linear:
            left_unit, right_unit = cg.left_unit, cg.right_unit
            for l in range(2, n + 1):
                prev, row = ins[l - 1], ins[l]
                for i in range(n - l + 1):
                    cell = row[i]
                    first = ins[1][i]
                    if first:
                        for b, wb in prev[i + 1].items():
                            for a, y, w in left_unit[b]:
                                wy = first.get(y)
                                if wy is not None:
                                    t = w + wy + wb
                                    if t <= ub:
                                        _relax(cell, a, t)
                    last = ins[1][i + l - 1]
                    if last:
                        for b, wb in prev[i].items():
                            for a, y, w in right_unit[b]:
                                wy = last.get(y)
                                if wy is not None:
                                    t = w + wy + wb
                                    if t <= ub:
                                        _relax(cell, a, t)
        else:
            by_left = cg.by_left
            for l in range(2, n + 1):
                row = ins[l]
                for i in range(n - l + 1):
                    cell = row[i]
                    for k in range(1, l):
                        lc = ins[k][i]
                        if not lc:
                            continue
                        rc = ins[l - k][i + k]
                        if not rc:
                            continue
                        for b, wb in lc.items():
                            for a, c, w in by_left[b]:
                                wc = rc.get(c)
                                if wc is not None:
                                    t = w + wb + wc
                                    if t <= ub:
                                        _relax(cell, a, t)
        self.inside_cells = ins

    def _fill_outside(self):
        cg, n, ub = self.cg, self.n, self.ub
        ins = self.inside_cells
        out = [None] + [[{} for _ in range(n - l + 1)] for l in range(1, n + 1)]
        top = ins[n][0].get(cg.start)
        self.min_weight = INF if top is None else top
        if top is not None:
            out[n][0][cg.start] = 0
        for l in range(n, 1, -1):
            for i in range(n - l + 1):
                cell = out[l][i]
                if not cell:
                    continue
                if self.linear:
                    for a, o in cell.items():
                        for left, y, b, w in cg.lin_by_lhs[a]:
                            if left:
                                yi, bi = i, i + 1
                            else:
                                yi, bi = i + l - 1, i
                            wy = ins[1][yi].get(y)
                            if wy is None:
                                continue
                            wb = ins[l - 1][bi].get(b)
                            if wb is None or o + w + wy + wb > ub:
                                continue
                            _relax(out[1][yi], y, o + w + wb)
                            _relax(out[l - 1][bi], b, o + w + wy)
                else:
                    for a, o in cell.items():
                        for b, c, w in cg.by_lhs[a]:
                            for k in range(1, l):
                                wb = ins[k][i].get(b)
                                if wb is None:
                                    continue
                                wc = ins[l - k][i + k].get(c)
                                if wc is None or o + w + wb + wc > ub:
                                    continue
                                _relax(out[k][i], b, o + w + wc)
                                _relax(out[l - k][i + k], c, o + w + wb)
        self.outside_cells = out

    def supported(self):
        """Per-position values that lie on some derivation within the bound."""
        cg, ub = self.cg, self.ub
        result = []
        for i, d in enumerate(self.sets):
            cell = self.outside_cells[1][i]
            keep = set()
            for v in d:
                for a, w in cg.term_rules.get(v, ()):
                    o = cell.get(a)
                    if o is not None and o + w <= ub:
                        keep.add(v)
                        break
            result.append(keep)
        return result

    def _get(self, cells, a, i, l):
        if not (1 <= i and 1 <= l and i + l - 1 <= self.n):
            raise IndexError((i, l))
        return cells[l][i - 1].get(self._index[a])

    def derivable(self, a, i, l):
        return self._get(self.inside_cells, a, i, l) is not None

    def reachable(self, a, i, l):
        return self._get(self.outside_cells, a, i, l) is not None

    def inside(self, a, i, l):
        w = self._get(self.inside_cells, a, i, l)
        return INF if w is None else w

    def outside(self, a, i, l):
        w = self._get(self.outside_cells, a, i, l)
        return INF if w is None else w

    def entries(self, l, i):
        """``{nonterminal: (inside, outside)}`` for the 1-based cell (i, l)."""
        ins = self.inside_cells[l][i - 1]
        outs = self.outside_cells[l][i - 1]
        return {self.cg.nts[a]: (w, outs.get(a, INF)) for a, w in ins.items()}


def _restrict(d, keep):
    return VarDomains(keep, d.names)


def cyk_propagate(g, d, linear_fast_path="auto"):
    """Domain consistency for Grammar(X, g); ``g`` in Chomsky form.

    Returns the filtered domains, or ``None`` if no string within the
    domains is in L(g).  ``linear_fast_path`` is ``'auto'``, ``'on'`` or
    ``'off'``; ``'auto'`` uses fixed split points whenever every binary rule
    has a child that spans one position (true of linear grammars).
    """
    d = as_domains(d)
    table = CykTable(g, d, INF, weighted=False, linear=linear_fast_path)
    if table.min_weight == INF:
        return None
    keep = table.supported()
    return _restrict(d, keep)


def weighted_propagate(g, d, z=ZBound(), linear_fast_path="auto"):
    """Domain consistency for WeightedCFG(X, z, g): min derivation weight <= z.

    Returns ``(domains, ZBound)`` with the lower bound of ``z`` raised to the
    cheapest string within the domains, or ``None`` when no string meets
    the upper bound.
    """
    d = as_domains(d)
    if z.is_failed:
        return None
    table = CykTable(g, d, z.ub, weighted=True, linear=linear_fast_path)
    if table.min_weight == INF or table.min_weight > z.ub:
        return None
    keep = table.supported()
    return _restrict(d, keep), ZBound(max(z.lb, table.min_weight), z.ub)


def regular_propagate(r, d):
    """Layered-automaton filtering for Regular(X, r)."""
    d = as_domains(d)
    n = len(d)
    delta = r.delta
    fwd = [{r.initial}]
    for dom in d:
        nxt = set()
        for q in fwd[-1]:
            for v in dom:
                nxt.update(delta.get((q, v), ()))
        fwd.append(nxt)
    bwd = [None] * (n + 1)
    bwd[n] = fwd[n] & r.accepting
    if not bwd[n]:
        return None
    keep = [set() for _ in range(n)]
    for i in range(n - 1, -1, -1):
        live = set()
        for q in fwd[i]:
            for v in d[i]:
                for q2 in delta.get((q, v), ()):
                    if q2 in bwd[i + 1]:
                        keep[i].add(v)
                        live.add(q)
        bwd[i] = live
    if any(not k for k in keep):
        return None
    return _restrict(d, keep)


def cyk_parse(g, s):
    """Membership of ``s`` in L(g), plain CYK over a Chomsky-form grammar."""
    return min_weight_parse(g, s, weighted=False) == 0


def min_weight_parse(g, s, weighted=True):
    """Cheapest derivation weight of ``s`` in the Chomsky-form grammar ``g``,
    or ``inf`` when ``s`` is not in the language."""
    if not classify(g).is_cnf:
        raise ValueError("grammar must be in Chomsky form")
    s = list(s)
    n = len(s)
    if n == 0:
        return INF
    unary, binary = {}, []
    for p in g.productions:
        w = p.weight if weighted else 0
        if len(p.rhs) == 1:
            unary.setdefault(p.rhs[0], []).append((p.lhs, w))
        else:
            binary.append((p.lhs, p.rhs[0], p.rhs[1], w))
    best = {}
    for i, a in enumerate(s):
        cell = {}
        for lhs, w in unary.get(a, ()):
            if w < cell.get(lhs, INF):
                cell[lhs] = w
        best[i, 1] = cell
    for l in range(2, n + 1):
        for i in range(n - l + 1):
            cell = {}
            for k in range(1, l):
                left, right = best[i, k], best[i + k, l - k]
                for lhs, b, c, w in binary:
                    if b in left and c in right:
                        t = w + left[b] + right[c]
                        if t < cell.get(lhs, INF):
                            cell[lhs] = t
            best[i, l] = cell
    return best[0, n].get(g.start, INF)


def brute_force_propagate(g, d, z=None):
    """Exact filtering by enumerating every assignment (test oracle).

    Same return contract as :func:`cyk_propagate` when ``z`` is ``None`` and
    as :func:`weighted_propagate` otherwise.
    """
    from .transforms import to_cnf

    d = as_domains(d)
    if d.size() > BRUTE_FORCE_LIMIT:
        raise ValueError(f"search space {d.size()} exceeds {BRUTE_FORCE_LIMIT}")
    if not classify(g).is_cnf:
        g = to_cnf(g)
    keep = [set() for _ in d]
    best = INF
    ub = INF if z is None else z.ub
    for s in itertools.product(*(sorted(x, key=repr) for x in d)):
        w = min_weight_parse(g, s, weighted=z is not None)
        if w < INF and w <= ub:
            best = min(best, w)
            for i, v in enumerate(s):
                keep[i].add(v)
    if best == INF:
        return None
    out = _restrict(d, keep)
    if z is None:
        return out
    return out, ZBound(max(z.lb, best), z.ub)
