"""Exhaustive formula checks by semantic classes.

A formula is evaluated on several "views" at once: a view is a set of
operation tables together with the vector of values of each variable over
all valuations.  Two formulas with the same value vectors in every view
behave identically under every further operation, so the enumeration keeps
one representative per class and exact syntactic counts per depth.  This
makes statements about every formula of a corpus (hundreds of millions of
terms at depth 3) checkable without building the terms.

The last level is never deduplicated: for binary operations the verdict of
every pair of classes is computed at once with a matrix product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra, ValuationLimitError, max_valuations
from .lang import App, Const, Signature, Term, Var, variable_pool


# exact counts are kept in int64; refuse anything that could overflow
COUNT_LIMIT = 2**62


def check_count_range(total: int, what: str) -> None:
    if total >= COUNT_LIMIT:
        raise OverflowError(f"{what}: {total} formulas exceed the exact 64-bit counting range")


@dataclass
class View:
    """Tables for each source symbol plus the per-variable value vectors."""

    label: str
    size: int
    top: int
    ops: dict[str, np.ndarray]
    atoms: list[np.ndarray]

    @property
    def width(self) -> int:
        return len(self.atoms[0]) if self.atoms else 1


def valuation_grid(domain: Sequence[int], num_vars: int) -> list[np.ndarray]:
    """Flattened value vectors of each variable over domain^num_vars (first variable slowest)."""
    dom = np.asarray(domain, dtype=np.int64)
    total = len(dom) ** num_vars
    if total > max_valuations():
        raise ValuationLimitError(f"{total} valuations exceed the limit {max_valuations()}")
    grids = np.meshgrid(*([dom] * num_vars), indexing="ij")
    return [g.ravel() for g in grids]


def algebra_view(label: str, a: FiniteAlgebra, num_vars: int, domain=None, atom_map=None, ops=None) -> View:
    """View of ``a`` with variables ranging over ``domain``; ``atom_map`` is applied to each variable value."""
    dom = np.arange(a.size) if domain is None else np.asarray(domain, dtype=np.int64)
    atoms = valuation_grid(dom, num_vars)
    if atom_map is not None:
        atoms = [np.asarray(atom_map)[x] for x in atoms]
    return View(label, a.size, a.top_index, dict(ops if ops is not None else a.tables), atoms)


@dataclass
class ClassTable:
    """Semantic classes of all formulas up to ``depth``."""

    sig: Signature
    views: list[View]
    depth: int
    vectors: list[np.ndarray]  # one (classes x width) array per view
    reps: list[Term]
    counts: list[np.ndarray]  # counts[d][i] = formulas of depth <= d in class i

    @property
    def size(self) -> int:
        return len(self.reps)

    def total(self, d: int | None = None) -> int:
        return int(self.counts[self.depth if d is None else d].sum())

    def valid(self, w: int) -> np.ndarray:
        return (self.vectors[w] == self.views[w].top).all(axis=1)


def _apply(view: View, sym: str, args: list[np.ndarray]) -> np.ndarray:
    table = view.ops[sym]
    if not args:
        return np.asarray(table)
    return table[tuple(args)]


def _dtype(views) -> type:
    return np.int16 if max(v.size for v in views) < 2**15 else np.int64


def build_classes(sig: Signature, views: Sequence[View], num_vars: int, depth: int) -> ClassTable:
    """Deduplicated classes of every formula of depth <= ``depth`` over p1..pk."""
    views = list(views)
    dt = _dtype(views)
    names = variable_pool(num_vars)
    vecs: list[list[np.ndarray]] = [[] for _ in views]
    reps: list[Term] = []
    index: dict[bytes, int] = {}
    count0: list[int] = []

    def key_of(rows: list[np.ndarray]) -> bytes:
        return b"".join(r.tobytes() for r in rows)

    def add(rows, term, cnt, counts):
        k = key_of(rows)
        i = index.get(k)
        if i is None:
            i = len(reps)
            index[k] = i
            reps.append(term)
            for w, r in enumerate(rows):
                vecs[w].append(r)
            counts.append(0)
        counts[i] += cnt
        return i

    for j, name in enumerate(names):
        add([v.atoms[j].astype(dt) for v in views], Var(name), 1, count0)
    for c in sig.constants:
        add([np.full(v.width, int(v.ops[c]), dtype=dt) for v in views], Const(c), 1, count0)
    counts = [np.array(count0, dtype=np.int64)]
    stacked = [np.stack(v) for v in vecs]
    for d in range(1, depth + 1):
        prev_le = counts[-1]
        prev2 = counts[-2] if len(counts) > 1 else np.zeros_like(prev_le)
        n_prev = len(reps)
        new_counts = list(prev_le)
        for sym, k in sig.operations:
            for idx in itertools.product(range(n_prev), repeat=k):
                cnt = int(np.prod([prev_le[i] for i in idx])) - int(np.prod([prev2[i] for i in idx]))
                if cnt == 0:
                    continue
                rows = [_apply(v, sym, [stacked[w][i] for i in idx]).astype(dt) for w, v in enumerate(views)]
                add(rows, App(sym, tuple(reps[i] for i in idx)), cnt, new_counts)
        old = [np.concatenate([c, np.zeros(len(reps) - len(c), dtype=np.int64)]) for c in counts]
        counts = old + [np.array(new_counts, dtype=np.int64)]
        stacked = [np.stack(v) for v in vecs]
    return ClassTable(sig, views, depth, stacked, reps, counts)


@dataclass
class LevelVerdicts:
    """Validity per view of every formula of depth exactly ``depth`` built from a class table."""

    # one entry per operation: (symbol, count array, [valid arrays per view])
    blocks: list[tuple[str, np.ndarray, list[np.ndarray]]] = field(default_factory=list)


def _bad_counts(view: View, sym: str, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """bad[i, j] = number of valuations where sym(left_i, right_j) is not top."""
    n = view.size
    bad = (np.asarray(view.ops[sym]) != view.top).astype(np.float32)  # n x n
    c, width = left.shape
    onehot = np.zeros((c, width * n), dtype=np.float32)
    rows = np.repeat(np.arange(c), width)
    cols = (np.arange(width) * n)[None, :] + left
    onehot[rows, cols.ravel()] = 1.0
    # q[j, v*n + x] = bad[x, right_j[v]]
    q = bad[:, right].transpose(1, 2, 0).reshape(right.shape[0], width * n)
    out = onehot @ q.T
    return np.rint(out).astype(np.int64)


def final_level(table: ClassTable) -> LevelVerdicts:
    """Verdicts for every formula of depth table.depth + 1, grouped by operation."""
    out = LevelVerdicts()
    n = table.total()
    check_count_range(sum(n**k for _, k in table.sig.operations) + n, "next level")
    le = table.counts[table.depth]
    lt = table.counts[table.depth - 1] if table.depth >= 1 else np.zeros_like(le)
    for sym, k in table.sig.operations:
        if k == 1:
            cnt = le - lt
            valid = [
                (_apply(v, sym, [table.vectors[w]]) == v.top).all(axis=1) for w, v in enumerate(table.views)
            ]
            out.blocks.append((sym, cnt, valid))
        elif k == 2:
            cnt = np.outer(le, le) - np.outer(lt, lt)
            valid = [_bad_counts(v, sym, table.vectors[w], table.vectors[w]) == 0 for w, v in enumerate(table.views)]
            out.blocks.append((sym, cnt, valid))
        else:
            raise NotImplementedError("operations of arity above 2 are not supported by the class engine")
    return out


def level_term(table: ClassTable, sym: str, index) -> Term:
    idx = index if isinstance(index, tuple) else (index,)
    return App(sym, tuple(table.reps[int(i)] for i in idx))


# --- masks of formulas of bounded depth, for sequent checks -----------------------


@dataclass
class MaskClasses:
    """Formulas of depth <= d grouped by their top-masks (valuations where they are top) in each view."""

    views: list[View]
    masks: list[np.ndarray]  # per view: classes x width, bool
    counts: np.ndarray
    reps: list[Term]

    @property
    def size(self) -> int:
        return len(self.reps)


def mask_classes(sig: Signature, views: Sequence[View], num_vars: int, depth: int) -> MaskClasses:
    """Every formula of depth <= ``depth``, reduced to its joint top-mask with exact counts."""
    views = list(views)
    rows_by_view: list[list[np.ndarray]] = [[] for _ in views]
    counts: list[np.ndarray] = []
    terms: list[list[Term] | tuple] = []
    if depth == 0:
        table = build_classes(sig, views, num_vars, 0)
        for w, v in enumerate(views):
            rows_by_view[w].append(table.vectors[w] == v.top)
        counts.append(table.counts[0])
        terms.append(("rep", table))
    else:
        table = build_classes(sig, views, num_vars, depth - 1)
        for w, v in enumerate(views):
            rows_by_view[w].append(table.vectors[w] == v.top)
        counts.append(table.counts[depth - 1])
        terms.append(("rep", table))
        le = table.counts[depth - 1]
        lt = table.counts[depth - 2] if depth >= 2 else np.zeros_like(le)
        for sym, k in sig.operations:
            idx = np.array(list(itertools.product(range(table.size), repeat=k)), dtype=np.int64)
            cnt = np.prod(le[idx], axis=1) - np.prod(lt[idx], axis=1)
            keep = cnt > 0
            idx, cnt = idx[keep], cnt[keep]
            for w, v in enumerate(views):
                args = [table.vectors[w][idx[:, j]] for j in range(k)]
                rows_by_view[w].append(_apply(v, sym, args) == v.top)
            counts.append(cnt)
            terms.append(("op", sym, idx, table))
    allmasks = [np.concatenate(r) for r in rows_by_view]
    allcounts = np.concatenate(counts)
    joint = np.concatenate(allmasks, axis=1)
    packed = np.packbits(joint, axis=1)
    _, first, inverse = np.unique(packed, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    order = np.argsort(first, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    cls = remap[inverse]
    firsts = first[order]
    masks = [m[firsts] for m in allmasks]
    cnts = np.zeros(len(order), dtype=np.int64)
    np.add.at(cnts, cls, allcounts)
    reps = [_term_at(terms, int(i)) for i in firsts]
    return MaskClasses(views, masks, cnts, reps)


def _term_at(blocks, flat: int) -> Term:
    for b in blocks:
        if b[0] == "rep":
            n = b[1].size
            if flat < n:
                return b[1].reps[flat]
        else:
            _, sym, idx, table = b
            n = len(idx)
            if flat < n:
                return App(sym, tuple(table.reps[int(i)] for i in idx[flat]))
        flat -= n
    raise IndexError(flat)


def sequent_bad_counts(premise: np.ndarray | None, conclusions: np.ndarray) -> np.ndarray:
    """bad[i, j]: valuations where premise mask i holds and conclusion mask j fails."""
    fail = (~conclusions).astype(np.float32)
    if premise is None:
        return fail.sum(axis=1, dtype=np.float64).astype(np.int64)
    return np.rint(premise.astype(np.float32) @ fail.T).astype(np.int64)
