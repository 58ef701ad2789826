"""Symbol assignments with a context and a selector, and corpus-relative checks of their conditions."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import FiniteAlgebra, term_function, terms_function
from .lang import (
    BOT,
    TOP,
    App,
    Const,
    Equation,
    Signature,
    SignatureError,
    Term,
    Var,
    check_term,
    get_signature,
    iter_formulas,
    parse_equation,
    parse_formula,
    render_formula,
    substitute,
    unary_variable,
    variables,
)
from .report import Report

MODES = ("selective", "context")


class TranslationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Translation:
    """A symbol assignment ``zeta`` (terms in x1..xn), a context and a selector."""

    name: str
    source: Signature
    target: Signature
    zeta: Mapping[str, Term]
    context: tuple[Equation, ...] = ()
    selector: Term | None = None
    mode: str = "selective"

    def __post_init__(self):
        if self.mode not in MODES:
            raise TranslationError(f"mode must be one of {MODES}")
        if self.mode == "selective" and self.selector is None:
            raise TranslationError("selective mode needs a selector")
        for sym, k in self.source.symbols:
            if sym not in self.zeta:
                raise TranslationError(f"{self.name}: no image for {sym!r}")
            t = self.zeta[sym]
            check_term(t, self.target)
            allowed = {f"x{i}" for i in range(1, k + 1)}
            extra = set(variables(t)) - allowed
            if extra:
                raise TranslationError(f"{self.name}: image of {sym!r} (arity {k}) uses {sorted(extra)}")
        for e in self.context:
            check_term(e.lhs, self.target)
            check_term(e.rhs, self.target)
            if len(e.variables()) > 1:
                raise TranslationError(f"{self.name}: context equation {e} has more than one variable")
        if self.selector is not None:
            check_term(self.selector, self.target)
            unary_variable(self.selector)

    def with_mode(self, mode: str) -> "Translation":
        return Translation(self.name, self.source, self.target, self.zeta, self.context, self.selector, mode)

    def selector_at(self, t: Term) -> Term:
        return substitute(self.selector, {unary_variable(self.selector): t})

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "zeta": {s: render_formula(self.zeta[s]) for s, _ in self.source.symbols},
            "context": [str(e) for e in self.context],
            "selector": render_formula(self.selector) if self.selector is not None else None,
            "mode": self.mode,
        }


def translation_from_dict(d: Mapping, name: str | None = None) -> Translation:
    try:
        src, tgt = get_signature(d["source"]), get_signature(d["target"])
        zeta = {s: parse_formula(text, tgt) for s, text in d["zeta"].items()}
        context = tuple(parse_equation(e, tgt) for e in d.get("context", []))
        sel = d.get("selector")
        selector = parse_formula(sel, tgt) if sel else None
        mode = d.get("mode", "selective")
    except KeyError as exc:
        raise TranslationError(f"translation spec is missing {exc}") from None
    return Translation(name or d.get("name", "custom"), src, tgt, zeta, context, selector, mode)


def load_translation(path) -> Translation:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return translation_from_dict(data, data.get("name", Path(path).stem))


_BUILTIN_SPECS = {
    "kgg": {
        "source": "BA",
        "target": "HA",
        "zeta": {"bot": "F", "top": "T", "meet": "x1 & x2", "join": "~~(x1 | x2)", "imp": "x1 -> x2"},
        "context": ["x = ~~x"],
        "selector": "~~x",
    },
    "gmt": {
        "source": "HA",
        "target": "S4",
        "zeta": {"bot": "F", "top": "T", "meet": "x1 & x2", "join": "x1 | x2", "imp": "[](~x1 | x2)"},
        "context": ["x = []x"],
        "selector": "[]x",
    },
    "goldblatt": {
        "source": "Ort",
        "target": "KTB",
        # join is not primitive in the clauses; it is the De Morgan dual of meet under the complement clause
        "zeta": {"bot": "F", "top": "T", "meet": "x1 & x2", "join": "[]~([]~x1 & []~x2)", "ortho": "[]~x1"},
        "context": ["x = []<>x"],
        "selector": "[]<>x",
    },
}

BUILTIN_TRANSLATIONS = tuple(_BUILTIN_SPECS)


def builtin_translation(name: str, mode: str = "selective") -> Translation:
    if name not in _BUILTIN_SPECS:
        raise TranslationError(f"unknown translation {name!r}; expected one of {', '.join(BUILTIN_TRANSLATIONS)}")
    return translation_from_dict(dict(_BUILTIN_SPECS[name], mode=mode), name)


def resolve_translation(spec: str) -> Translation:
    if spec in _BUILTIN_SPECS:
        return builtin_translation(spec)
    return load_translation(spec)


def apply_translation(tr: Translation, t: Term) -> Term:
    check_term(t, tr.source)
    cache: dict[Term, Term] = {}

    def go(u: Term) -> Term:
        hit = cache.get(u)
        if hit is not None:
            return hit
        if isinstance(u, Var):
            out = tr.selector_at(u) if tr.mode == "selective" else u
        elif isinstance(u, Const):
            out = tr.zeta[u.symbol]
        else:
            out = substitute(tr.zeta[u.symbol], {f"x{i + 1}": go(c) for i, c in enumerate(u.args)})
        cache[u] = out
        return out

    return go(t)


def translate_equation_set(tr: Translation, eqs: Iterable[Equation]) -> list[Equation]:
    """Translate both sides of each equation; duplicates are dropped, first occurrence kept."""
    out: dict[tuple, Equation] = {}
    for e in eqs:
        te = Equation(apply_translation(tr, e.lhs), apply_translation(tr, e.rhs))
        out.setdefault((te.lhs, te.rhs), te)
    return list(out.values())


# --- element-level views -----------------------------------------------------------


def context_regular(tr: Translation, a: FiniteAlgebra) -> list[int]:
    """Elements satisfying every context equation (selector fixpoints when there is no context)."""
    if not tr.context:
        return selector_fixpoints(tr.selector, a)
    ok = np.ones(a.size, dtype=bool)
    for e in tr.context:
        names = e.variables() or ["x"]
        lhs, rhs = terms_function(a, [e.lhs, e.rhs], names[:1])
        ok &= lhs == rhs
    return [int(x) for x in np.flatnonzero(ok)]


def selector_fixpoints(f: Term, a: FiniteAlgebra) -> list[int]:
    table = a.unary(f)
    return [int(x) for x in np.flatnonzero(table == np.arange(a.size))]


def zeta_table(tr: Translation, a: FiniteAlgebra, symbol: str) -> np.ndarray:
    """The term function of zeta(symbol) on ``a`` (a 0-d array for constants)."""
    k = tr.source.arity(symbol)
    return term_function(a, tr.zeta[symbol], [f"x{i}" for i in range(1, k + 1)])


# --- corpus checks -----------------------------------------------------------------


def _names(corpus) -> list[str]:
    return [a.name for a in corpus]


def check_selector_idempotent(f: Term | Translation, corpus: Sequence[FiniteAlgebra], suite: str = "selector-idempotent") -> Report:
    """f(f(x)) = f(x) on every algebra; failures carry the violating element."""
    if isinstance(f, Translation):
        f = f.selector
    rep = Report(suite, _names(corpus))
    for a in corpus:
        table = a.unary(f)
        bad = np.flatnonzero(table[table] != table)
        w = None
        if len(bad):
            x = int(bad[0])
            w = {"algebra": a.name, "element": a.label(x), "f(x)": a.label(int(table[x])), "f(f(x))": a.label(int(table[table[x]]))}
        rep.add(f"{a.name}/idempotent", not len(bad), w)
    return rep


def check_selectivity(tr: Translation, corpus: Sequence[FiniteAlgebra]) -> Report:
    """(1) every context equation holds at f(x); (2) context-regular elements are f-fixed."""
    if not tr.context or tr.selector is None:
        raise TranslationError(f"{tr.name}: selectivity needs both a context and a selector")
    rep = Report(f"selectivity/{tr.name}", _names(corpus))
    x = unary_variable(tr.selector)
    for a in corpus:
        sel = a.unary(tr.selector)
        w1 = None
        for e in tr.context:
            names = e.variables() or [x]
            lhs = term_function(a, e.lhs, names[:1])
            rhs = term_function(a, e.rhs, names[:1])
            bad = np.flatnonzero(lhs[sel] != rhs[sel])
            if len(bad) and w1 is None:
                w1 = {"algebra": a.name, "element": a.label(int(bad[0])), "equation": str(e)}
        rep.add(f"{a.name}/selected-are-regular", w1 is None, w1)
        reg = context_regular(tr, a)
        bad2 = [e for e in reg if sel[e] != e]
        w2 = None
        if bad2:
            w2 = {"algebra": a.name, "element": a.label(bad2[0]), "f(element)": a.label(int(sel[bad2[0]]))}
        rep.add(f"{a.name}/regular-are-fixed", not bad2, w2)
    return rep


def check_context_compatibility(tr: Translation, corpus: Sequence[FiniteAlgebra]) -> Report:
    """Each zeta(g) maps tuples of context-regular elements to context-regular elements."""
    rep = Report(f"context-compatibility/{tr.name}", _names(corpus))
    for a in corpus:
        reg = np.asarray(context_regular(tr, a), dtype=np.int64)
        inside = np.zeros(a.size, dtype=bool)
        inside[reg] = True
        for sym, k in tr.source.symbols:
            vals = term_function(a, tr.zeta[sym], [f"x{i}" for i in range(1, k + 1)], reg)
            bad = np.flatnonzero(~inside[vals.ravel()])
            w = None
            if len(bad):
                idx = np.unravel_index(int(bad[0]), vals.shape) if k else ()
                w = {
                    "algebra": a.name,
                    "arguments": [a.label(int(reg[i])) for i in idx],
                    "value": a.label(int(vals.ravel()[bad[0]])),
                }
            rep.add(f"{a.name}/{sym}", not len(bad), w)
    return rep


# --- essential fullness ------------------------------------------------------------


def _match_selector(tr: Translation, t: Term) -> Term:
    """Return lam' with t == f(lam'), or raise."""
    x = unary_variable(tr.selector)
    binding: dict[str, Term] = {}

    def unify(pat: Term, u: Term) -> bool:
        if isinstance(pat, Var):
            if pat.name in binding:
                return binding[pat.name] == u
            binding[pat.name] = u
            return True
        if isinstance(pat, Const):
            return pat == u
        return isinstance(u, App) and u.symbol == pat.symbol and all(unify(p, c) for p, c in zip(pat.args, u.args))

    if not unify(tr.selector, t):
        raise TranslationError(f"{render_formula(t)!r} is not of the form {render_formula(tr.selector)}(...)")
    return binding[x]


def _strip_selected_atoms(tr: Translation, lam: Term) -> Term:
    """Replace every f(p) by p; raise if a variable occurs outside such a pattern."""

    def go(u: Term) -> Term:
        if isinstance(u, Var):
            raise TranslationError(f"variable {u.name} occurs outside the selector pattern")
        if isinstance(u, Const):
            return u
        try:
            inner = _match_selector(tr, u)
        except TranslationError:
            inner = None
        if isinstance(inner, Var):
            return inner
        return App(u.symbol, tuple(go(c) for c in u.args))

    return go(lam)


def selector_shape(tr: Translation, t: Term) -> Term:
    """For t = f(lam(f(x1),...,f(xn))) return lam (over the target signature, in x1..xn)."""
    if tr.selector is None:
        raise TranslationError(f"{tr.name} has no selector")
    return _strip_selected_atoms(tr, _match_selector(tr, t))


def _kgg_extract(lam: Term) -> Term:
    # double negation distributes over meet and implication and turns join into the translated join
    return lam


def _is_open_shaped(u: Term) -> bool:
    if isinstance(u, (Var, Const)):
        return True
    if u.symbol == "box":
        return True
    if u.symbol in ("meet", "join"):
        return all(_is_open_shaped(c) for c in u.args)
    return False


def _gmt_open(u: Term) -> Term:
    """Source term whose translation equals the open-valued term ``u`` (atoms p stand for []p)."""
    if isinstance(u, (Var, Const)):
        return u
    if u.symbol == "box":
        return _gmt_box(u.args[0])
    return App(u.symbol, tuple(_gmt_open(c) for c in u.args))


def _boolean_atoms(u: Term, out: list[Term]) -> None:
    if _is_open_shaped(u) and not (isinstance(u, Const)):
        if u not in out:
            out.append(u)
        return
    if isinstance(u, App):
        for c in u.args:
            _boolean_atoms(c, out)


def _boolean_value(u: Term, env: dict[Term, bool]) -> bool:
    if u in env:
        return env[u]
    if isinstance(u, Const):
        return u.symbol == "top"
    a = [_boolean_value(c, env) for c in u.args]
    if u.symbol == "meet":
        return a[0] and a[1]
    if u.symbol == "join":
        return a[0] or a[1]
    if u.symbol == "imp":
        return (not a[0]) or a[1]
    raise TranslationError(f"unexpected symbol {u.symbol!r} in a Boolean skeleton")


def _big(symbol: str, terms: list[Term], empty: Term) -> Term:
    if not terms:
        return empty
    out = terms[0]
    for t in terms[1:]:
        out = App(symbol, (out, t))
    return out


def _gmt_box(v: Term) -> Term:
    """Source term whose translation equals []v, via a conjunctive normal form over open atoms."""
    if _is_open_shaped(v):
        return _gmt_open(v)
    atoms: list[Term] = []
    _boolean_atoms(v, atoms)
    clauses = []
    for bits in itertools.product((True, False), repeat=len(atoms)):
        env = dict(zip(atoms, bits))
        if not _boolean_value(v, env):
            # clause: not(and of true atoms) or (or of false atoms), i.e. []( ~C | D ) = GMT(C -> D)
            c = _big("meet", [_gmt_open(a) for a, b in zip(atoms, bits) if b], TOP)
            d = _big("join", [_gmt_open(a) for a, b in zip(atoms, bits) if not b], BOT)
            clauses.append(App("imp", (c, d)))
    return _big("meet", clauses, TOP)


def corpus_equivalent(tr: Translation, left: Term, right: Term, corpus: Sequence[FiniteAlgebra]) -> bool:
    names = sorted(set(variables(left)) | set(variables(right)))
    for a in corpus:
        l, r = terms_function(a, [left, right], names)
        if not np.array_equal(l, r):
            return False
    return True


def essential_fullness_witness(
    tr: Translation, t: Term, corpus: Sequence[FiniteAlgebra], depth_cap: int = 2
) -> Term | None:
    """A source term whose translation is corpus-equivalent to ``t``, or None.

    For the double-negation and box translations the term is read off
    structurally and then checked; any other translation is searched
    exhaustively in corpus order up to ``depth_cap``.
    """
    lam = selector_shape(tr, t)
    if tr.mode != "selective":
        tr = tr.with_mode("selective")
    candidate = None
    if tr.name == "kgg" and tr.source.name in ("BA", "HA") and tr.target.name == "HA":
        candidate = _kgg_extract(lam)
    elif tr.name == "gmt" and tr.target.name == "S4":
        candidate = _gmt_box(lam)
    if candidate is not None:
        try:
            check_term(candidate, tr.source)
        except SignatureError:
            candidate = None
    if candidate is not None:
        return candidate if corpus_equivalent(tr, apply_translation(tr, candidate), t, corpus) else None
    return search_preimage(tr, t, corpus, depth_cap)


def search_preimage(tr: Translation, t: Term, corpus: Sequence[FiniteAlgebra], depth_cap: int) -> Term | None:
    names = variables(t)
    target = [term_function(a, t, names) for a in corpus]
    for gamma in iter_formulas(tr.source, max(len(names), 1), depth_cap, names=names or ["p1"]):
        image = apply_translation(tr, gamma)
        if all(np.array_equal(term_function(a, image, names), want) for a, want in zip(corpus, target)):
            return gamma
    return None
