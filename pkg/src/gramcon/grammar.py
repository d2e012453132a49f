"""Grammar data model, text format, and syntactic class detection.

Symbols are arbitrary hashable values (usually strings).  Whether a symbol
is a terminal or a nonterminal is recorded explicitly in the grammar, so
constructed symbols such as paired terminals or state triples can live
alongside plain names.
"""
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Optional

MAX_ENUM_LEN = 12
WEIGHT_LIMIT = 2 ** 31

_WEIGHT_RE = re.compile(r"^\[(\d+)\]$")
_BARE_TERMINAL_RE = re.compile(r"^[a-z0-9_][A-Za-z0-9_]*$")
_NONTERMINAL_RE = re.compile(r"^[A-Z][^\s'\[\]]*$")
_TOKEN_RE = re.compile(r"'[^'\s]+'|\S+")


class GrammarSyntaxError(ValueError):
    """Malformed grammar text; carries the offending line number."""

    def __init__(self, lineno, msg):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class Symbol(NamedTuple):
    id: int
    kind: str  # 'terminal' | 'nonterminal'
    name: str


@dataclass(frozen=True)
class Production:
    lhs: Hashable
    rhs: tuple
    weight: int = 0
    index: int = 0

    def __str__(self):
        rhs = " ".join(map(str, self.rhs))
        return f"{self.lhs} -> {rhs} [{self.weight}]"


@dataclass(frozen=True)
class Grammar:
    """An epsilon-free context-free grammar, optionally weighted.

    Use :meth:`build` rather than the raw constructor: it orders symbols
    canonically (first use, start symbol first) and numbers productions.
    """

    terminals: tuple
    nonterminals: tuple
    productions: tuple
    start: Hashable
    weighted: bool = False

    def __post_init__(self):
        terms = set(self.terminals)
        nts = set(self.nonterminals)
        if len(terms) != len(self.terminals) or len(nts) != len(self.nonterminals):
            raise ValueError("duplicate symbol declaration")
        if terms & nts:
            raise ValueError(f"symbols declared as both kinds: {terms & nts}")
        if self.start not in nts:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        for i, p in enumerate(self.productions):
            if p.index != i:
                raise ValueError(f"production {p} has index {p.index}, expected {i}")
            if p.lhs not in nts:
                raise ValueError(f"undeclared left-hand side in {p}")
            if not p.rhs:
                raise ValueError(f"empty right-hand side for {p.lhs}")
            for s in p.rhs:
                if s not in nts and s not in terms:
                    raise ValueError(f"undeclared symbol {s!r} in {p}")
            if not isinstance(p.weight, int) or not 0 <= p.weight < WEIGHT_LIMIT:
                raise ValueError(f"weight must be a nonnegative integer below 2^31: {p}")

    @classmethod
    def build(cls, rules, start=None, terminals=(), nonterminals=(), weighted=None):
        """Build a grammar from ``(lhs, rhs)`` or ``(lhs, rhs, weight)`` tuples.

        Any left-hand side is a nonterminal.  Other symbols are classified by
        the explicit ``terminals`` / ``nonterminals`` declarations, and
        failing that, strings starting with an uppercase letter are
        nonterminals and everything else is a terminal.
        """
        rules = [tuple(r) for r in rules]
        declared_t = list(dict.fromkeys(terminals))
        declared_n = list(dict.fromkeys(nonterminals))
        lhs_set = {r[0] for r in rules}
        t_set, n_set = set(declared_t), set(declared_n) | lhs_set

        def is_nonterminal(sym):
            if sym in n_set:
                return True
            if sym in t_set:
                return False
            return isinstance(sym, str) and sym[:1].isupper()

        if start is None:
            if rules:
                start = rules[0][0]
            elif declared_n:
                start = declared_n[0]
            else:
                raise ValueError("grammar without productions needs a start symbol")
        nts = {start: None}
        ts = {}
        prods = []
        any_weight = False
        for r in rules:
            if len(r) == 2:
                lhs, rhs = r
                w = 0
            else:
                lhs, rhs, w = r
                any_weight = True
            rhs = tuple(rhs)
            nts.setdefault(lhs)
            for s in rhs:
                (nts if is_nonterminal(s) else ts).setdefault(s)
            prods.append(Production(lhs, rhs, w, len(prods)))
        for s in declared_n:
            nts.setdefault(s)
        for s in declared_t:
            ts.setdefault(s)
        if weighted is None:
            weighted = any_weight
        return cls(tuple(ts), tuple(nts), tuple(prods), start, weighted)

    def replace(self, rules, start=None, terminals=None, nonterminals=None, weighted=None):
        """New grammar with the given rules, inheriting this grammar's declarations."""
        return Grammar.build(
            rules,
            start=self.start if start is None else start,
            terminals=self.terminals if terminals is None else terminals,
            nonterminals=() if nonterminals is None else nonterminals,
            weighted=self.weighted if weighted is None else weighted,
        )

    def size(self):
        return sum(1 + len(p.rhs) for p in self.productions)

    def rules(self):
        return [(p.lhs, p.rhs, p.weight) for p in self.productions]

    def is_terminal(self, sym):
        return sym in self._terminal_set

    @cached_property
    def _memo(self):
        # derived artifacts (compiled tables); never affects equality
        return {}

    @cached_property
    def _terminal_set(self):
        return frozenset(self.terminals)

    @cached_property
    def _nonterminal_set(self):
        return frozenset(self.nonterminals)

    @cached_property
    def by_lhs(self):
        out = {a: [] for a in self.nonterminals}
        for p in self.productions:
            out[p.lhs].append(p)
        return out

    def symbol(self, sym):
        if sym in self._terminal_set:
            return Symbol(self.terminals.index(sym), "terminal", str(sym))
        if sym in self._nonterminal_set:
            return Symbol(self.nonterminals.index(sym), "nonterminal", str(sym))
        raise KeyError(sym)

    def __str__(self):
        return serialize_grammar(self)


@dataclass(frozen=True)
class GrammarClass:
    is_regular: bool
    is_linear: bool
    is_greibach: bool
    is_simple: bool
    is_cnf: bool
    fixed_growth: Optional[tuple] = None


def _strip_comment(line):
    return "" if line.lstrip().startswith("#") else line


def _unquote(tok):
    if len(tok) >= 3 and tok[0] == tok[-1] == "'":
        return tok[1:-1], True
    return tok, False


def parse_grammar(text):
    """Parse the line-oriented grammar format.

    ``LHS -> sym ... [w]`` per line; ``start: NAME``, ``terminals: ...`` and
    ``nonterminals: ...`` header lines are optional.
    """
    rules = []
    start = None
    extra_t, extra_n = [], []
    quoted_terms = set()
    weighted = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and head.strip() in ("start", "terminals", "nonterminals") and "->" not in head:
            toks = _TOKEN_RE.findall(rest)
            key = head.strip()
            if key == "start":
                if len(toks) != 1:
                    raise GrammarSyntaxError(lineno, "start header takes one name")
                start = toks[0]
            elif key == "terminals":
                for tok in toks:
                    name, _ = _unquote(tok)
                    extra_t.append(name)
                    quoted_terms.add(name)
            else:
                extra_n.extend(toks)
            continue
        toks = _TOKEN_RE.findall(line)
        if len(toks) < 2 or toks[1] != "->":
            raise GrammarSyntaxError(lineno, "expected 'LHS -> symbols'")
        lhs = toks[0]
        if not _NONTERMINAL_RE.match(lhs):
            raise GrammarSyntaxError(lineno, f"left-hand side {lhs!r} is not a nonterminal name")
        body = toks[2:]
        w = 0
        if body and _WEIGHT_RE.match(body[-1]):
            w = int(_WEIGHT_RE.match(body[-1]).group(1))
            if w >= WEIGHT_LIMIT:
                raise GrammarSyntaxError(lineno, "weight exceeds 2^31")
            weighted = True
            body = body[:-1]
        if not body:
            raise GrammarSyntaxError(lineno, "empty right-hand side")
        rhs = []
        for tok in body:
            name, quoted = _unquote(tok)
            if quoted:
                quoted_terms.add(name)
            elif "'" in tok:
                raise GrammarSyntaxError(lineno, f"bad token {tok!r}")
            rhs.append(name)
        rules.append((lhs, tuple(rhs), w))
    if not rules and start is None:
        raise GrammarSyntaxError(0, "no productions and no start header")
    lhs_names = {r[0] for r in rules}
    clash = lhs_names & quoted_terms
    if clash:
        raise GrammarSyntaxError(0, f"quoted terminals used as left-hand sides: {sorted(clash)}")
    # quoted tokens are terminals regardless of case
    terminals = [s for r in rules for s in r[1] if s in quoted_terms] + extra_t
    return Grammar.build(rules, start=start, terminals=terminals,
                         nonterminals=extra_n, weighted=weighted)


def _terminal_token(sym):
    name = str(sym)
    if not name or any(c.isspace() for c in name) or "'" in name:
        raise ValueError(f"terminal {name!r} cannot be written in the text format")
    return name if _BARE_TERMINAL_RE.match(name) else f"'{name}'"


def _nonterminal_token(sym):
    name = str(sym)
    if not _NONTERMINAL_RE.match(name):
        raise ValueError(f"nonterminal {name!r} cannot be written in the text format")
    return name


def serialize_grammar(g):
    lines = []
    if not g.productions or g.productions[0].lhs != g.start:
        lines.append(f"start: {_nonterminal_token(g.start)}")
    used_t, used_n = {g.start}, {g.start}
    for p in g.productions:
        used_n.add(p.lhs)
        for s in p.rhs:
            (used_t if g.is_terminal(s) else used_n).add(s)
    extra_t = [t for t in g.terminals if t not in used_t]
    extra_n = [a for a in g.nonterminals if a not in used_n]
    if extra_t:
        lines.append("terminals: " + " ".join(_terminal_token(t) for t in extra_t))
    if extra_n:
        lines.append("nonterminals: " + " ".join(_nonterminal_token(a) for a in extra_n))
    for p in g.productions:
        rhs = " ".join(_terminal_token(s) if g.is_terminal(s) else _nonterminal_token(s)
                       for s in p.rhs)
        line = f"{_nonterminal_token(p.lhs)} -> {rhs}"
        if g.weighted:
            line += f" [{p.weight}]"
        lines.append(line)
    return "\n".join(lines) + "\n"


def classify(g):
    is_t = g.is_terminal
    regular = linear = greibach = cnf = True
    growth = set()
    for p in g.productions:
        nt_pos = [i for i, s in enumerate(p.rhs) if not is_t(s)]
        if len(nt_pos) > 1:
            linear = regular = False
            growth.add(None)
        elif nt_pos:
            k = nt_pos[0]
            growth.add((k, len(p.rhs) - k - 1))
            if k != len(p.rhs) - 1 or k == 0:
                regular = False
        if not is_t(p.rhs[0]) or any(is_t(s) for s in p.rhs[1:]):
            greibach = False
        if not ((len(p.rhs) == 1 and is_t(p.rhs[0]))
                or (len(p.rhs) == 2 and len(nt_pos) == 2)):
            cnf = False
    simple = greibach
    if greibach:
        seen = set()
        for p in g.productions:
            key = (p.lhs, p.rhs[0])
            if key in seen:
                simple = False
                break
            seen.add(key)
    fixed = None
    if len(growth) == 1 and None not in growth:
        (lr,) = growth
        if sum(lr) >= 1:
            fixed = lr
    return GrammarClass(regular, linear, greibach, simple, cnf, fixed)


def enumerate_language(g, max_len):
    """All strings of L(g) with length at most ``max_len``, as tuples.

    Leftmost breadth-first derivation; since no production shrinks a
    sentential form, forms longer than ``max_len`` are discarded.
    """
    if max_len > MAX_ENUM_LEN:
        raise ValueError(f"max_len {max_len} exceeds guard {MAX_ENUM_LEN}")
    is_t = g.is_terminal
    by_lhs = g.by_lhs
    out = set()
    seen = {(g.start,)}
    queue = deque(seen)
    while queue:
        form = queue.popleft()
        for i, s in enumerate(form):
            if not is_t(s):
                break
        else:
            out.add(form)
            continue
        head, tail = form[:i], form[i + 1:]
        for p in by_lhs[s]:
            new = head + p.rhs + tail
            if len(new) <= max_len and new not in seen:
                seen.add(new)
                queue.append(new)
    return out
