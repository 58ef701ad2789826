"""Finite algebras given by operation tables, and the usual constructions on them."""

from __future__ import annotations

import hashlib
import itertools
import os
from dataclasses import InitVar, dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lang import (
    App,
    Const,
    Equation,
    QuasiEquation,
    Signature,
    SignatureError,
    Term,
    Var,
    get_signature,
    parse_quasiequation,
)

DEFAULT_MAX_VALUATIONS = 10**7


class AlgebraError(ValueError):
    pass


class AxiomError(AlgebraError):
    def __init__(self, algebra: str, axiom: str, law: str, witness: dict | None):
        self.algebra = algebra
        self.axiom = axiom
        self.law = law
        self.witness = witness
        where = "" if witness is None else " at " + ", ".join(f"{k}={v}" for k, v in witness.items())
        super().__init__(f"{algebra}: axiom '{axiom}' ({law}) fails{where}")


class ValuationLimitError(AlgebraError):
    pass


class SizeCapError(AlgebraError):
    pass


def max_valuations() -> int:
    raw = os.environ.get("PAL_MAX_VALUATIONS")
    return int(raw) if raw else DEFAULT_MAX_VALUATIONS


# --- axiom suites --------------------------------------------------------------

_LATTICE_LAWS = [
    ("meet commutative", "x & y = y & x"),
    ("join commutative", "x | y = y | x"),
    ("meet associative", "x & (y & z) = (x & y) & z"),
    ("join associative", "x | (y | z) = (x | y) | z"),
    ("meet absorption", "x & (x | y) = x"),
    ("join absorption", "x | (x & y) = x"),
    ("bottom", "x & F = F"),
    ("top", "x | T = T"),
]

_HEYTING_LAWS = _LATTICE_LAWS + [
    ("distributivity", "x & (y | z) = (x & y) | (x & z)"),
    ("residuation (left to right)", "x & y & z = x & y |- x & (y -> z) = x"),
    ("residuation (right to left)", "x & (y -> z) = x |- x & y & z = x & y"),
]

_BOOLEAN_LAWS = _HEYTING_LAWS + [("excluded middle", "x | ~x = T")]

_NORMAL_BOX_LAWS = [
    ("box top", "[]T = T"),
    ("box meet", "[](x & y) = []x & []y"),
]

_AXIOM_TEXT: dict[str, list[tuple[str, str]]] = {
    "HA": _HEYTING_LAWS,
    "BA": _BOOLEAN_LAWS,
    "S4": _BOOLEAN_LAWS
    + _NORMAL_BOX_LAWS
    + [
        ("box reflexivity ([]x <= x)", "[]x & x = []x"),
        ("box transitivity ([]x <= [][]x)", "[]x & [][]x = []x"),
    ],
    "KTB": _BOOLEAN_LAWS
    + _NORMAL_BOX_LAWS
    + [
        ("box reflexivity ([]p -> p)", "[]x & x = []x"),
        ("symmetry (p -> []<>p)", "x & []<>x = x"),
    ],
    "Ort": _LATTICE_LAWS
    + [
        ("complement meet", "x & ~x = F"),
        ("complement join", "x | ~x = T"),
        ("involution", "~~x = x"),
        ("De Morgan", "~(x & y) = ~x | ~y"),
    ],
}

_SUITE_CACHE: dict[str, list[tuple[str, QuasiEquation]]] = {}


def axiom_suite(sig: Signature | str) -> list[tuple[str, QuasiEquation]]:
    """Named axioms of a builtin signature, as quasi-equations (plain equations have no premises)."""
    sig = get_signature(sig)
    if sig.name not in _SUITE_CACHE:
        _SUITE_CACHE[sig.name] = [(name, parse_quasiequation(text, sig)) for name, text in _AXIOM_TEXT[sig.name]]
    return _SUITE_CACHE[sig.name]


# --- the algebra type ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """Carrier 0..size-1 with one total table per symbol (0-d arrays for constants)."""

    name: str
    sig: Signature
    size: int
    tables: Mapping[str, np.ndarray]
    labels: tuple[str, ...] | None = None
    verify: InitVar[bool] = True

    def __post_init__(self, verify: bool):
        n = self.size
        if n < 1:
            raise AlgebraError(f"{self.name}: empty carrier")
        frozen = {}
        for sym, k in self.sig.symbols:
            if sym not in self.tables:
                raise AlgebraError(f"{self.name}: missing table for {sym!r}")
            arr = np.asarray(self.tables[sym])
            if arr.shape != (n,) * k or not np.issubdtype(arr.dtype, np.integer):
                raise AlgebraError(f"{self.name}: table not total for {sym!r} (expected shape {(n,) * k})")
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise AlgebraError(f"{self.name}: table for {sym!r} has entries outside 0..{n - 1}")
            arr = np.array(arr, dtype=np.int64)
            arr.setflags(write=False)
            frozen[sym] = arr
        extra = set(self.tables) - set(frozen)
        if extra:
            raise AlgebraError(f"{self.name}: symbols {sorted(extra)} not in {self.sig.name}")
        object.__setattr__(self, "tables", frozen)
        if self.labels is not None:
            if len(self.labels) != n:
                raise AlgebraError(f"{self.name}: {len(self.labels)} labels for {n} elements")
            object.__setattr__(self, "labels", tuple(self.labels))
        if verify:
            check_axioms(self)

    @property
    def top_index(self) -> int:
        return int(self.tables["top"])

    @property
    def bot_index(self) -> int:
        return int(self.tables["bot"])

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def index(self, label: str | int) -> int:
        if isinstance(label, (int, np.integer)):
            return int(label)
        if self.labels is not None and label in self.labels:
            return self.labels.index(label)
        if label.isdigit() and int(label) < self.size:
            return int(label)
        raise AlgebraError(f"{self.name}: no element labelled {label!r}")

    @cached_property
    def leq(self) -> np.ndarray:
        """Boolean matrix of the lattice order, x <= y iff x & y = x."""
        meet = self.tables["meet"]
        return meet == np.arange(self.size)[:, None]

    def unary(self, t: Term) -> np.ndarray:
        """Table of a one-variable term."""
        from .lang import unary_variable

        return term_function(self, t, [unary_variable(t)])

    def renamed(self, name: str) -> "FiniteAlgebra":
        return FiniteAlgebra(name, self.sig, self.size, self.tables, self.labels, verify=False)

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, {self.sig.name}, size={self.size})"


def check_axioms(a: FiniteAlgebra) -> None:
    for name, q in axiom_suite(a.sig):
        w = quasiequation_witness(a, q)
        if w is not None:
            raise AxiomError(a.name, name, str(q), {k: a.label(v) for k, v in w.items()})


def failing_axioms(a: FiniteAlgebra, sig: Signature | str | None = None) -> list[str]:
    """Names of the axioms of ``sig`` (default: a's own) that ``a`` violates."""
    return [name for name, q in axiom_suite(sig or a.sig) if not satisfies_quasiequation(a, q)]


# --- evaluation ------------------------------------------------------------------


def evaluate(a: FiniteAlgebra, t: Term, v: Mapping[str, int]) -> int:
    """Value of ``t`` under the valuation ``v`` (a fold through the tables)."""
    if isinstance(t, Var):
        if t.name not in v:
            raise AlgebraError(f"unbound variable {t.name!r}")
        x = int(v[t.name])
        if not 0 <= x < a.size:
            raise AlgebraError(f"valuation sends {t.name} outside the carrier of {a.name}")
        return x
    if t.symbol not in a.tables:
        raise SignatureError(f"symbol {t.symbol!r} not in {a.sig.name}")
    table = a.tables[t.symbol]
    if isinstance(t, Const):
        return int(table)
    return int(table[tuple(evaluate(a, c, v) for c in t.args)])


def _guard(count: int, what: str) -> None:
    limit = max_valuations()
    if count > limit:
        raise ValuationLimitError(f"{what} needs {count} valuations, above the limit {limit} (PAL_MAX_VALUATIONS)")


def term_function(
    a: FiniteAlgebra, t: Term, names: Sequence[str], domain: Sequence[int] | np.ndarray | None = None
) -> np.ndarray:
    """Values of ``t`` at every valuation of ``names`` into ``domain`` (default: the carrier).

    The result has one axis per name, each of length len(domain); entry
    [i1, ..., ik] is the value at names[j] -> domain[ij].
    """
    return terms_function(a, [t], names, domain)[0]


def terms_function(a, terms: Sequence[Term], names: Sequence[str], domain=None) -> list[np.ndarray]:
    dom = np.arange(a.size) if domain is None else np.asarray(domain, dtype=np.int64)
    k = len(names)
    _guard(len(dom) ** k, f"evaluation over {a.name}")
    shape = (len(dom),) * k
    axes = {}
    for i, name in enumerate(names):
        s = [1] * k
        s[i] = len(dom)
        axes[name] = dom.reshape(s)
    cache: dict[Term, np.ndarray] = {}

    def go(u: Term):
        if isinstance(u, Var):
            if u.name not in axes:
                raise AlgebraError(f"unbound variable {u.name!r}")
            return axes[u.name]
        hit = cache.get(u)
        if hit is not None:
            return hit
        if u.symbol not in a.tables:
            raise SignatureError(f"symbol {u.symbol!r} not in {a.sig.name}")
        table = a.tables[u.symbol]
        if isinstance(u, Const):
            out = np.asarray(table)
        else:
            out = table[tuple(go(c) for c in u.args)]
        cache[u] = out
        return out

    return [np.broadcast_to(go(t), shape) for t in terms]


def _first_true(mask: np.ndarray, names, dom) -> dict[str, int] | None:
    if not mask.any():
        return None
    idx = np.unravel_index(int(np.argmax(mask)), mask.shape) if mask.ndim else ()
    return {n: int(dom[i]) for n, i in zip(names, idx)}


def equation_witness(a: FiniteAlgebra, e: Equation, domain=None) -> dict[str, int] | None:
    """First valuation (in lexicographic order) where the two sides differ, or None."""
    names = e.variables()
    dom = np.arange(a.size) if domain is None else np.asarray(domain, dtype=np.int64)
    lhs, rhs = terms_function(a, [e.lhs, e.rhs], names, dom)
    return _first_true(lhs != rhs, names, dom)


def quasiequation_witness(a: FiniteAlgebra, q: QuasiEquation, domain=None) -> dict[str, int] | None:
    names = q.variables()
    dom = np.arange(a.size) if domain is None else np.asarray(domain, dtype=np.int64)
    terms = [t for e in (*q.premises, q.conclusion) for t in (e.lhs, e.rhs)]
    vals = terms_function(a, terms, names, dom)
    shape = (len(dom),) * len(names)
    bad = np.ones(shape, dtype=bool)
    for i in range(len(q.premises)):
        bad &= vals[2 * i] == vals[2 * i + 1]
    bad &= vals[-2] != vals[-1]
    return _first_true(bad, names, dom)


def satisfies_equation(a: FiniteAlgebra, e: Equation) -> bool:
    return equation_witness(a, e) is None


def satisfies_quasiequation(a: FiniteAlgebra, q: QuasiEquation) -> bool:
    return quasiequation_witness(a, q) is None


def validity_witness(a: FiniteAlgebra, t: Term, domain=None) -> dict[str, int] | None:
    return equation_witness(a, Equation(t, Const("top")), domain)


def validates(a: FiniteAlgebra, t: Term) -> bool:
    """Does ``t`` take the value top under every valuation?"""
    return validity_witness(a, t) is None


# --- embeddings and subalgebras --------------------------------------------------


@dataclass(frozen=True, eq=False)
class Embedding:
    """Injective map commuting with the tables of ``symbols`` (default: all of source's)."""

    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple[int, ...]
    symbols: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))

    def __call__(self, x: int) -> int:
        return self.map[x]

    @property
    def image(self) -> list[int]:
        return sorted(self.map)

    def problems(self) -> list[str]:
        out = []
        if len(self.map) != self.source.size:
            return [f"map has {len(self.map)} entries for {self.source.size} elements"]
        if len(set(self.map)) != len(self.map):
            out.append("not injective")
        syms = self.symbols if self.symbols is not None else tuple(s for s, _ in self.source.sig.symbols)
        if not is_homomorphism(self.source, self.target, self.map, syms):
            out.append("does not commute with the operations")
        return out

    def check(self) -> "Embedding":
        probs = self.problems()
        if probs:
            raise AlgebraError(f"invalid embedding {self.source.name} -> {self.target.name}: {'; '.join(probs)}")
        return self


def is_homomorphism(a: FiniteAlgebra, b: FiniteAlgebra, h: Sequence[int], symbols: Iterable[str] | None = None) -> bool:
    h = np.asarray(h, dtype=np.int64)
    if h.shape != (a.size,) or h.min() < 0 or h.max() >= b.size:
        return False
    for sym in symbols if symbols is not None else [s for s, _ in a.sig.symbols]:
        k = a.sig.arity(sym)
        ta, tb = a.tables[sym], b.tables[sym]
        if k == 0:
            ok = h[int(ta)] == int(tb)
        else:
            grids = np.meshgrid(*([np.arange(a.size)] * k), indexing="ij")
            ok = np.array_equal(h[ta], tb[tuple(h[g] for g in grids)])
        if not ok:
            return False
    return True


def closure(a: FiniteAlgebra, seed: Iterable[int]) -> list[int]:
    """Least subset containing ``seed`` and the constants and closed under every operation."""
    inside = np.zeros(a.size, dtype=bool)
    inside[list(seed)] = True
    for c in a.sig.constants:
        inside[int(a.tables[c])] = True
    ops = [(a.tables[s], k) for s, k in a.sig.operations]
    while True:
        elems = np.flatnonzero(inside)
        grown = inside.copy()
        for table, k in ops:
            grown[table[np.ix_(*([elems] * k))].ravel()] = True
        if np.array_equal(grown, inside):
            return [int(x) for x in elems]
        inside = grown


def closure_terms(a: FiniteAlgebra, seed: Mapping[int, Term]) -> dict[int, Term]:
    """Like :func:`closure`, recording for each element a term over the seed's names.

    Breadth-first, so each recorded term has minimal depth; ties go to the
    first symbol in signature order and then the lexicographically least
    argument tuple.
    """
    found: dict[int, Term] = {}
    for x in sorted(seed):
        found.setdefault(int(x), seed[x])
    for c in a.sig.constants:
        found.setdefault(int(a.tables[c]), Const(c))
    frontier = True
    while frontier:
        frontier = False
        elems = sorted(found)
        new: dict[int, Term] = {}
        for sym, k in a.sig.operations:
            table = a.tables[sym]
            for args in itertools.product(elems, repeat=k):
                r = int(table[args])
                if r not in found and r not in new:
                    new[r] = App(sym, tuple(found[x] for x in args))
        if new:
            found.update(new)
            frontier = True
    return found


def subalgebra_on(a: FiniteAlgebra, carrier: Sequence[int], name: str | None = None) -> tuple[FiniteAlgebra, Embedding]:
    """Induced algebra on a closed subset (ids kept in ascending order)."""
    carrier = sorted(int(x) for x in carrier)
    pos = np.full(a.size, -1, dtype=np.int64)
    pos[carrier] = np.arange(len(carrier))
    car = np.asarray(carrier, dtype=np.int64)
    tables = {}
    for sym, k in a.sig.symbols:
        t = a.tables[sym]
        sub = t[np.ix_(*([car] * k))] if k else t
        if (pos[sub] < 0).any():
            raise AlgebraError(f"subset of {a.name} is not closed under {sym!r}")
        tables[sym] = pos[sub]
    labels = tuple(a.label(x) for x in carrier) if a.labels is not None else tuple(str(x) for x in carrier)
    sub = FiniteAlgebra(name or f"sub({a.name})", a.sig, len(carrier), tables, labels, verify=False)
    return sub, Embedding(sub, a, tuple(carrier))


def generated_subalgebra(a: FiniteAlgebra, seed: Iterable[int], name: str | None = None) -> tuple[FiniteAlgebra, Embedding]:
    return subalgebra_on(a, closure(a, seed), name)


def _interleave(table: np.ndarray, k: int, first: bool) -> np.ndarray:
    shape = []
    for n in table.shape:
        shape += [n, 1] if first else [1, n]
    return table.reshape(shape) if k else table


def direct_product(a: FiniteAlgebra, b: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    """Pointwise product; the pair (i, j) is encoded as i*|b| + j."""
    if a.sig != b.sig:
        raise SignatureError(f"cannot multiply {a.sig.name} by {b.sig.name}")
    m = b.size
    n = a.size * m
    tables = {}
    for sym, k in a.sig.symbols:
        ta, tb = a.tables[sym], b.tables[sym]
        if k == 0:
            tables[sym] = np.asarray(int(ta) * m + int(tb))
        else:
            tables[sym] = (_interleave(ta, k, True) * m + _interleave(tb, k, False)).reshape((n,) * k)
    labels = tuple(f"({a.label(i)},{b.label(j)})" for i in range(a.size) for j in range(m))
    return FiniteAlgebra(name or f"{a.name}x{b.name}", a.sig, n, tables, labels, verify=False)


# --- homomorphism search ---------------------------------------------------------


def _fingerprints(a: FiniteAlgebra) -> list[tuple]:
    """Isomorphism-invariant element descriptors, refined a few rounds."""
    n = a.size
    col = [0] * n
    consts = {int(a.tables[c]): i for i, c in enumerate(a.sig.constants)}
    base = []
    for x in range(n):
        parts: list = [consts.get(x, -1)]
        for sym, k in a.sig.operations:
            t = a.tables[sym]
            if k == 1:
                parts.append(int(t[x] == x))
            elif k == 2:
                parts += [int((t[x, :] == x).sum()), int((t[:, x] == x).sum()), int(t[x, x] == x)]
        base.append(tuple(parts))
    col = _canon_colors(base)
    for _ in range(3):
        sig = []
        for x in range(n):
            parts = [col[x]]
            for sym, k in a.sig.operations:
                t = a.tables[sym]
                if k == 1:
                    parts.append(col[int(t[x])])
                elif k == 2:
                    parts.append(tuple(sorted(col[int(v)] for v in t[x, :])))
                    parts.append(tuple(sorted(col[int(v)] for v in t[:, x])))
            sig.append(tuple(parts))
        new = _canon_colors(sig)
        if len(set(new)) == len(set(col)):
            col = new
            break
        col = new
    return [sig_x for sig_x in zip(col, base)]


def _canon_colors(items: list) -> list:
    # colours must be comparable across two algebras, so digest the descriptors themselves
    return [hashlib.blake2b(repr(x).encode(), digest_size=8).hexdigest() for x in items]


def find_homomorphisms(
    a: FiniteAlgebra,
    b: FiniteAlgebra,
    partial: Mapping[int, int] | None = None,
    injective_only: bool = False,
    limit: int | None = None,
    symbols: Sequence[str] | None = None,
    candidates: Sequence[Sequence[int]] | None = None,
) -> list[tuple[int, ...]]:
    """All homomorphisms a -> b extending ``partial``, in lexicographic order of the map.

    Elements of ``a`` are assigned in ascending id with targets tried in
    ascending id; every assignment is propagated through the tables before
    branching.  ``symbols`` restricts the operations that must commute.
    """
    if a.sig != b.sig:
        raise SignatureError(f"signature mismatch {a.sig.name} vs {b.sig.name}")
    syms = list(symbols) if symbols is not None else [s for s, _ in a.sig.symbols]
    ops = [(a.tables[s], b.tables[s], a.sig.arity(s)) for s in syms if a.sig.arity(s) > 0]
    h0 = np.full(a.size, -1, dtype=np.int64)
    forced = dict(partial or {})
    for s in syms:
        if a.sig.arity(s) == 0:
            x, y = int(a.tables[s]), int(b.tables[s])
            if forced.get(x, y) != y:
                return []
            forced[x] = y
    allowed = None
    if candidates is not None:
        allowed = [set(c) for c in candidates]
    results: list[tuple[int, ...]] = []

    def assign(h: np.ndarray, pairs: dict[int, int]) -> np.ndarray | None:
        h = h.copy()
        for x, y in pairs.items():
            if h[x] not in (-1, y):
                return None
            if allowed is not None and y not in allowed[x]:
                return None
            h[x] = y
        while True:
            if injective_only:
                used = h[h >= 0]
                if len(np.unique(used)) != len(used):
                    return None
            dom = np.flatnonzero(h >= 0)
            changed = False
            for ta, tb, k in ops:
                grid = np.ix_(*([dom] * k))
                res = ta[grid].ravel()
                img = tb[np.ix_(*([h[dom]] * k))].ravel()
                cur = h[res]
                if ((cur >= 0) & (cur != img)).any():
                    return None
                fresh = cur < 0
                if fresh.any():
                    r, i = res[fresh], img[fresh]
                    order = np.lexsort((i, r))
                    r, i = r[order], i[order]
                    same = r[1:] == r[:-1]
                    if (i[1:][same] != i[:-1][same]).any():
                        return None
                    if allowed is not None and any(int(y) not in allowed[int(x)] for x, y in zip(r, i)):
                        return None
                    h[r] = i
                    changed = True
            if not changed:
                return h

    def search(h: np.ndarray):
        if limit is not None and len(results) >= limit:
            return
        free = np.flatnonzero(h < 0)
        if len(free) == 0:
            results.append(tuple(int(x) for x in h))
            return
        x = int(free[0])
        used = set(int(y) for y in h[h >= 0]) if injective_only else set()
        for y in range(b.size):
            if y in used:
                continue
            nxt = assign(h, {x: y})
            if nxt is not None:
                search(nxt)
                if limit is not None and len(results) >= limit:
                    return

    start = assign(h0, forced)
    if start is not None:
        search(start)
    return results


def is_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra, cap: int = 16) -> tuple[int, ...] | None:
    """A bijective homomorphism a -> b, or None."""
    if a.sig != b.sig:
        raise SignatureError(f"signature mismatch {a.sig.name} vs {b.sig.name}")
    if max(a.size, b.size) > cap:
        raise SizeCapError(f"isomorphism search capped at size {cap}, got {a.size} and {b.size}")
    if a.size != b.size:
        return None
    fa, fb = _fingerprints(a), _fingerprints(b)
    if sorted(fa) != sorted(fb):
        return None
    cands = [[y for y in range(b.size) if fb[y] == fa[x]] for x in range(a.size)]
    found = find_homomorphisms(a, b, injective_only=True, limit=1, candidates=cands)
    return found[0] if found else None


# --- congruences -----------------------------------------------------------------

Partition = tuple[tuple[int, ...], ...]


def _canonical(labels: Sequence[int]) -> Partition:
    blocks: dict[int, list[int]] = {}
    for x, l in enumerate(labels):
        blocks.setdefault(l, []).append(x)
    return tuple(sorted(tuple(b) for b in blocks.values()))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[max(rx, ry)] = min(rx, ry)
        return True


def congruence_generated(a: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Least congruence identifying each given pair (closure under unary polynomial translations)."""
    uf = _UnionFind(a.size)
    todo = [(int(x), int(y)) for x, y in pairs]
    for x, y in todo:
        uf.union(x, y)
    ops = [(a.tables[s], k) for s, k in a.sig.operations]
    while todo:
        x, y = todo.pop()
        for table, k in ops:
            for pos in range(k):
                for rest in itertools.product(range(a.size), repeat=k - 1):
                    ax = rest[:pos] + (x,) + rest[pos:]
                    ay = rest[:pos] + (y,) + rest[pos:]
                    u, v = int(table[ax]), int(table[ay])
                    if uf.union(u, v):
                        todo.append((u, v))
    return _canonical([uf.find(x) for x in range(a.size)])


def is_congruence(a: FiniteAlgebra, partition: Partition) -> bool:
    lab = np.empty(a.size, dtype=np.int64)
    seen = []
    for i, block in enumerate(partition):
        lab[list(block)] = i
        seen += list(block)
    if sorted(seen) != list(range(a.size)):
        return False
    for s, k in a.sig.operations:
        t = lab[a.tables[s]]
        for pos in range(k):
            # t must be constant along each block in axis pos
            moved = np.moveaxis(t, pos, 0)
            for block in partition:
                rows = moved[list(block)]
                if (rows != rows[0]).any():
                    return False
    return True


def _join(p: Partition, q: Partition, n: int) -> Partition:
    uf = _UnionFind(n)
    for part in (p, q):
        for block in part:
            for x in block[1:]:
                uf.union(block[0], x)
    return _canonical([uf.find(x) for x in range(n)])


def enumerate_congruences(a: FiniteAlgebra, cap: int = 12) -> list[Partition]:
    """Every congruence, as joins of principal ones; identity first, total last."""
    if a.size > cap:
        raise SizeCapError(f"congruence enumeration capped at size {cap}, got {a.size}")
    n = a.size
    principal = {congruence_generated(a, [(x, y)]) for x in range(n) for y in range(x + 1, n)}
    identity = _canonical(range(n))
    found = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for c in frontier:
            for p in principal:
                j = _join(c, p, n)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(found, key=lambda p: (-len(p), p))


def quotient(a: FiniteAlgebra, partition: Partition, name: str | None = None) -> FiniteAlgebra:
    partition = tuple(sorted(tuple(sorted(b)) for b in partition))
    if not is_congruence(a, partition):
        raise AlgebraError(f"partition {partition} is not a congruence of {a.name}")
    lab = np.empty(a.size, dtype=np.int64)
    for i, block in enumerate(partition):
        lab[list(block)] = i
    reps = np.array([b[0] for b in partition], dtype=np.int64)
    tables = {}
    for s, k in a.sig.symbols:
        t = a.tables[s]
        tables[s] = lab[t[np.ix_(*([reps] * k))]] if k else np.asarray(lab[int(t)])
    labels = tuple("{" + ",".join(a.label(x) for x in b) + "}" for b in partition)
    return FiniteAlgebra(name or f"{a.name}/~", a.sig, len(partition), tables, labels)


def trivial_algebra(sig: Signature | str) -> FiniteAlgebra:
    sig = get_signature(sig)
    tables = {s: np.zeros((1,) * k, dtype=np.int64) if k else np.asarray(0) for s, k in sig.symbols}
    return FiniteAlgebra(f"trivial_{sig.name}", sig, 1, tables, ("*",))


def with_signature(a: FiniteAlgebra, sig: Signature | str, name: str | None = None) -> FiniteAlgebra:
    """Same tables read in another signature with the same symbols (e.g. a Boolean HA as a BA)."""
    sig = get_signature(sig)
    return FiniteAlgebra(name or a.name, sig, a.size, {s: a.tables[s] for s, _ in sig.symbols}, a.labels)


def algebra_to_dict(a: FiniteAlgebra) -> dict:
    out = {
        "name": a.name,
        "signature": a.sig.name,
        "size": a.size,
        "top": a.top_index,
        "bot": a.bot_index,
        "tables": {s: a.tables[s].tolist() for s, _ in a.sig.symbols},
    }
    if a.labels is not None:
        out["labels"] = list(a.labels)
    return out


def algebra_from_dict(d: Mapping, verify: bool = True) -> FiniteAlgebra:
    try:
        sig = get_signature(d["signature"])
        n = int(d["size"])
        raw = d["tables"]
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"malformed algebra description: {exc}") from None
    tables = {}
    for s, k in sig.symbols:
        if s not in raw:
            raise AlgebraError(f"table not total: missing {s!r}")
        try:
            arr = np.array(raw[s], dtype=np.int64)
        except (ValueError, TypeError):
            raise AlgebraError(f"table not total for {s!r}") from None
        if arr.shape != (n,) * k:
            raise AlgebraError(f"table not total for {s!r}: shape {arr.shape}, expected {(n,) * k}")
        tables[s] = arr
    for key, sym in (("top", "top"), ("bot", "bot")):
        if key in d and int(d[key]) != int(tables[sym]):
            raise AlgebraError(f"field {key!r} disagrees with the {sym!r} table")
    labels = tuple(d["labels"]) if d.get("labels") is not None else None
    return FiniteAlgebra(str(d.get("name", "algebra")), sig, n, tables, labels, verify=verify)
