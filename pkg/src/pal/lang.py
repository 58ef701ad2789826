"""Signatures, term ASTs, the formula grammar, and substitutions.

Terms are plain immutable trees that do not carry a signature; a term is
"over" a signature when every symbol it uses belongs to it.  Functions that
care take the signature explicitly (see :func:`check_term`).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union


class SignatureError(ValueError):
    pass


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} at position {pos}"
        super().__init__(message)


@dataclass(frozen=True)
class Signature:
    name: str
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate symbol in signature {self.name}")

    def arity(self, symbol: str) -> int:
        for s, k in self.symbols:
            if s == symbol:
                return k
        raise SignatureError(f"symbol {symbol!r} not in {self.name}")

    def __contains__(self, symbol: str) -> bool:
        return any(s == symbol for s, _ in self.symbols)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(s for s, k in self.symbols if k == 0)

    @property
    def operations(self) -> tuple[tuple[str, int], ...]:
        return tuple((s, k) for s, k in self.symbols if k > 0)

    def __str__(self):
        return self.name


_LATTICE = (("bot", 0), ("top", 0), ("meet", 2), ("join", 2))

HA = Signature("HA", _LATTICE + (("imp", 2),))
BA = Signature("BA", _LATTICE + (("imp", 2),))
S4 = Signature("S4", _LATTICE + (("imp", 2), ("box", 1)))
KTB = Signature("KTB", _LATTICE + (("imp", 2), ("box", 1)))
Ort = Signature("Ort", _LATTICE + (("ortho", 1),))

SIGNATURES = {s.name: s for s in (HA, BA, S4, KTB, Ort)}


def get_signature(name: str | Signature) -> Signature:
    if isinstance(name, Signature):
        return name
    try:
        return SIGNATURES[name]
    except KeyError:
        raise SignatureError(f"unknown signature {name!r}; expected one of {sorted(SIGNATURES)}") from None


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    symbol: str

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True, slots=True)
class App:
    symbol: str
    args: tuple["Term", ...]

    def __str__(self):
        return render_formula(self)


Term = Union[Var, Const, App]

BOT = Const("bot")
TOP = Const("top")


def neg(t: Term) -> Term:
    return App("imp", (t, BOT))


def box(t: Term) -> Term:
    return App("box", (t,))


def dia(t: Term) -> Term:
    return neg(box(neg(t)))


def app(symbol: str, *args: Term) -> Term:
    if not args:
        return Const(symbol)
    return App(symbol, tuple(args))


def variables(t: Term) -> list[str]:
    """Variables of ``t`` in order of first occurrence."""
    seen: dict[str, None] = {}
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            seen.setdefault(u.name)
        elif isinstance(u, App):
            stack.extend(reversed(u.args))
    return list(seen)


def symbols_of(t: Term) -> set[str]:
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Const):
            out.add(u.symbol)
        elif isinstance(u, App):
            out.add(u.symbol)
            stack.extend(u.args)
    return out


def depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max(depth(a) for a in t.args)
    return 0


def check_term(t: Term, sig: Signature) -> None:
    """Raise SignatureError unless every symbol of ``t`` is in ``sig`` with the right arity."""
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Const):
            if sig.arity(u.symbol) != 0:
                raise SignatureError(f"{u.symbol!r} is not a constant of {sig.name}")
        elif isinstance(u, App):
            k = sig.arity(u.symbol)
            if k != len(u.args):
                raise SignatureError(f"{u.symbol!r} has arity {k} in {sig.name}, got {len(u.args)} arguments")
            stack.extend(u.args)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{render_formula(self.lhs)} = {render_formula(self.rhs)}"

    def variables(self) -> list[str]:
        return _merge_vars([self.lhs, self.rhs])


@dataclass(frozen=True)
class QuasiEquation:
    premises: tuple[Equation, ...]
    conclusion: Equation

    def __str__(self):
        if not self.premises:
            return str(self.conclusion)
        return f"{', '.join(map(str, self.premises))} |- {self.conclusion}"

    def variables(self) -> list[str]:
        terms = [t for e in (*self.premises, self.conclusion) for t in (e.lhs, e.rhs)]
        return _merge_vars(terms)


def _merge_vars(terms: Iterable[Term]) -> list[str]:
    seen: dict[str, None] = {}
    for t in terms:
        for v in variables(t):
            seen.setdefault(v)
    return list(seen)


# --- substitutions -----------------------------------------------------------


@dataclass(frozen=True)
class Substitution:
    """Simultaneous replacement of variables; unmapped variables stay put."""

    mapping: Mapping[str, Term] = field(default_factory=dict)
    sig: Signature | None = None

    def __post_init__(self):
        if self.sig is not None:
            for t in self.mapping.values():
                check_term(t, self.sig)

    def __call__(self, name: str) -> Term:
        return self.mapping.get(name, Var(name))

    def compose(self, other: "Substitution") -> "Substitution":
        """``self`` first, then ``other``: v -> substitute(self(v), other)."""
        names = set(self.mapping) | set(other.mapping)
        return Substitution({v: substitute(self(v), other) for v in sorted(names)}, self.sig or other.sig)


def substitute(t: Term, s: Substitution | Mapping[str, Term]) -> Term:
    if not isinstance(s, Substitution):
        s = Substitution(dict(s))
    if s.sig is not None:
        check_term(t, s.sig)
    mapping = s.mapping
    if not mapping:
        return t
    cache: dict[Term, Term] = {}

    def go(u: Term) -> Term:
        if isinstance(u, Var):
            return mapping.get(u.name, u)
        if isinstance(u, Const):
            return u
        hit = cache.get(u)
        if hit is None:
            hit = App(u.symbol, tuple(go(a) for a in u.args))
            cache[u] = hit
        return hit

    return go(t)


def unary_variable(f: Term) -> str:
    vs = variables(f)
    if len(vs) != 1:
        raise SignatureError(f"selector {render_formula(f)!r} must have exactly one variable, has {len(vs)}")
    return vs[0]


def selector_substitution(f: Term, names: Sequence[str]) -> Substitution:
    """Map each listed variable q to f[x := q]."""
    x = unary_variable(f)
    return Substitution({q: substitute(f, {x: Var(q)}) for q in names})


def apply_selector(t: Term, f: Term) -> Term:
    """``t[f(p)/p]`` for every variable p of ``t``."""
    return substitute(t, selector_substitution(f, variables(t)))


# --- grammar -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->|\[\]|<>|[|&~()])|([a-z][a-zA-Z0-9_]*|[TF](?![a-zA-Z0-9_]))|(\S))")

# parsed sub-spans keyed by (signature, token strings); renderings of large
# corpora share almost all of their subterms, so this keeps round trips cheap
_SPAN_CACHE: dict[tuple, Term] = {}
_SPAN_CACHE_LIMIT = 1 << 20


def _tokenize(text: str) -> tuple[list[str], list[int]]:
    toks, where = [], []
    for m in _TOKEN.finditer(text):
        if m.lastindex == 3:
            raise FormulaSyntaxError(f"unexpected character {m.group(3)!r}", text, m.start(3))
        toks.append(m.group(m.lastindex))
        where.append(m.start(m.lastindex))
    return toks, where


class _Parser:
    """Precedence splitting over token spans.

    A span is split at its first top-level "->" (right associative), else
    at its last top-level "|", else at its last top-level "&" (both left
    associative); otherwise it is a prefix operator, an atom, or a
    parenthesised formula.  This accepts exactly the documented grammar.
    """

    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks, self.where = _tokenize(text)

    def fail(self, msg: str, i: int):
        pos = self.where[i] if i < len(self.where) else len(self.text)
        raise FormulaSyntaxError(msg, self.text, pos)

    def need(self, symbol: str, i: int):
        if symbol not in self.sig:
            self.fail(f"symbol {self.toks[i]} not in {self.sig.name}", i)

    def parse(self) -> Term:
        depth = 0
        for i, tok in enumerate(self.toks):
            if tok == "(":
                depth += 1
            elif tok == ")":
                depth -= 1
                if depth < 0:
                    self.fail("unexpected ')'", i)
        if depth > 0:
            self.fail("expected ')'", len(self.toks))
        return self.span(0, len(self.toks))

    def span(self, lo: int, hi: int) -> Term:
        if lo >= hi:
            self.fail("unexpected end of input" if hi >= len(self.toks) else f"unexpected {self.toks[hi]!r}", hi)
        key = (self.sig.name, *self.toks[lo:hi])
        hit = _SPAN_CACHE.get(key)
        if hit is not None:
            return hit
        t = self._split(lo, hi)
        if len(_SPAN_CACHE) >= _SPAN_CACHE_LIMIT:
            _SPAN_CACHE.clear()
        _SPAN_CACHE[key] = t
        return t

    def _split(self, lo: int, hi: int) -> Term:
        toks = self.toks
        depth = 0
        first_imp = last_or = last_and = -1
        for i in range(lo, hi):
            tok = toks[i]
            if tok == "(":
                depth += 1
            elif tok == ")":
                depth -= 1
            elif depth == 0:
                if tok == "->":
                    if first_imp < 0:
                        first_imp = i
                elif tok == "|":
                    if first_imp < 0:
                        last_or = i
                elif tok == "&":
                    if first_imp < 0 and last_or < 0:
                        last_and = i
        if first_imp >= 0:
            self.need("imp", first_imp)
            return App("imp", (self.span(lo, first_imp), self.span(first_imp + 1, hi)))
        if last_or >= 0:
            self.need("join", last_or)
            return App("join", (self.span(lo, last_or), self.span(last_or + 1, hi)))
        if last_and >= 0:
            self.need("meet", last_and)
            # "&" binds tighter than "|", but a later "|" would have been found first
            return App("meet", (self.span(lo, last_and), self.span(last_and + 1, hi)))
        tok = toks[lo]
        if tok == "~":
            if "ortho" in self.sig:
                return App("ortho", (self.span(lo + 1, hi),))
            self.need("imp", lo)
            return neg(self.span(lo + 1, hi))
        if tok == "[]":
            self.need("box", lo)
            return box(self.span(lo + 1, hi))
        if tok == "<>":
            self.need("box", lo)
            return dia(self.span(lo + 1, hi))
        if tok == "(":
            depth = 0
            for i in range(lo, hi):
                if toks[i] == "(":
                    depth += 1
                elif toks[i] == ")":
                    depth -= 1
                    if depth == 0:
                        break
            if i != hi - 1:
                self.fail(f"unexpected {toks[i + 1]!r}", i + 1)
            return self.span(lo + 1, hi - 1)
        if hi - lo > 1:
            self.fail(f"unexpected {toks[lo + 1]!r}", lo + 1)
        if tok == "T":
            self.need("top", lo)
            return TOP
        if tok == "F":
            self.need("bot", lo)
            return BOT
        if tok[0].isalpha():
            return Var(tok)
        self.fail(f"unexpected {tok!r}", lo)


def parse_formula(text: str, sig: Signature | str) -> Term:
    return _Parser(text, get_signature(sig)).parse()


def parse_equation(text: str, sig: Signature | str) -> Equation:
    sides = text.split("=")
    if len(sides) != 2:
        raise FormulaSyntaxError(f"equation needs exactly one '=': {text!r}")
    return Equation(parse_formula(sides[0], sig), parse_formula(sides[1], sig))


def parse_quasiequation(text: str, sig: Signature | str) -> QuasiEquation:
    if "|-" not in text:
        return QuasiEquation((), parse_equation(text, sig))
    left, right = text.split("|-", 1)
    prem = tuple(parse_equation(p, sig) for p in left.split(",") if p.strip())
    return QuasiEquation(prem, parse_equation(right, sig))


# precedence levels: impl < disj < conj < unary/atom
_BINARY = {"imp": ("->", 1), "join": ("|", 2), "meet": ("&", 3)}
_UNARY_LEVEL = 4


def _is_neg(t: Term) -> bool:
    return isinstance(t, App) and t.symbol == "imp" and t.args[1] == BOT


def _is_box_neg(t: Term) -> bool:
    return isinstance(t, App) and t.symbol == "box" and _is_neg(t.args[0])


def _render(t: Term) -> tuple[str, int, str | None]:
    """Return (text, level, top binary symbol or None)."""
    if isinstance(t, Var):
        return t.name, _UNARY_LEVEL, None
    if isinstance(t, Const):
        if t.symbol == "top":
            return "T", _UNARY_LEVEL, None
        if t.symbol == "bot":
            return "F", _UNARY_LEVEL, None
        return t.symbol, _UNARY_LEVEL, None
    sym, args = t.symbol, t.args
    if _is_neg(t):
        inner = args[0]
        # <>B is ~[]~B; when B is itself []~C prefer ~[]<>C
        if _is_box_neg(inner) and not _is_box_neg(inner.args[0].args[0]):
            return "<>" + _operand(inner.args[0].args[0]), _UNARY_LEVEL, None
        return "~" + _operand(inner), _UNARY_LEVEL, None
    if sym == "box":
        return "[]" + _operand(args[0]), _UNARY_LEVEL, None
    if sym == "ortho":
        return "~" + _operand(args[0]), _UNARY_LEVEL, None
    if sym in _BINARY and len(args) == 2:
        op, level = _BINARY[sym]
        # left-assoc & and |, right-assoc ->; mixed binaries always get parentheses
        assoc_side = 1 if sym == "imp" else 0
        parts = []
        for side, child in enumerate(args):
            text, clevel, csym = _render(child)
            if csym is not None and not (csym == sym and side == assoc_side):
                text = f"({text})"
            parts.append(text)
        return f"{parts[0]} {op} {parts[1]}", level, sym
    inner = ", ".join(render_formula(a) for a in args)
    return f"{sym}({inner})", _UNARY_LEVEL, None


def _operand(t: Term) -> str:
    text, level, _ = _render(t)
    return text if level >= _UNARY_LEVEL else f"({text})"


def render_formula(t: Term) -> str:
    return _render(t)[0]


def render_equation(e: Equation) -> str:
    return str(e)


# --- corpus ------------------------------------------------------------------


def variable_pool(num_vars: int) -> list[str]:
    return [f"p{i}" for i in range(1, num_vars + 1)]


def corpus_size(sig: Signature, num_vars: int, max_depth: int) -> int:
    """Number of terms formula_corpus would return, without building them."""
    prev, cur = 0, num_vars + len(sig.constants)
    for _ in range(max_depth):
        nxt = cur + sum(cur**k - prev**k for _, k in sig.operations)
        prev, cur = cur, nxt
    return cur


def iter_formulas(
    sig: Signature, num_vars: int, max_depth: int, names: Sequence[str] | None = None
) -> Iterator[Term]:
    """Lazily enumerate every AST of depth <= max_depth over p1..pk (or ``names``).

    Terms come in order of depth; within a depth, by symbol order of the
    signature and then lexicographically over child tuples.  Only the
    terms of depth < max_depth are kept in memory.
    """
    if num_vars < 1 or max_depth < 0:
        raise ValueError("need num_vars >= 1 and max_depth >= 0")
    names = list(names) if names is not None else variable_pool(num_vars)
    level = [Var(v) for v in names[:num_vars]] + [Const(c) for c in sig.constants]
    yield from level
    n_old = 0
    for d in range(1, max_depth + 1):
        last = d == max_depth
        new: list[Term] = []
        for sym, k in sig.operations:
            for idx in itertools.product(range(len(level)), repeat=k):
                if max(idx) < n_old:
                    continue
                t = App(sym, tuple(level[i] for i in idx))
                if not last:
                    new.append(t)
                yield t
        # the first n_old entries of 'level' are the terms of depth < d - 1
        n_old = len(level)
        level = level + new


def formula_corpus(sig: Signature | str, num_vars: int, max_depth: int) -> list[Term]:
    return list(iter_formulas(get_signature(sig), num_vars, max_depth))
