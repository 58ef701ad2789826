"""The regular-element functor for selective translations and the Boolean envelope of a Heyting algebra."""

from __future__ import annotations

import numpy as np

from .algebra import (
    AlgebraError,
    Embedding,
    FiniteAlgebra,
    failing_axioms,
    find_homomorphisms,
    is_isomorphic,
    term_function,
    trivial_algebra,
)
from .corpus import FiniteFrame, preorder_s4_algebra
from .lang import HA, S4
from .report import Report
from .translate import Translation, builtin_translation, context_regular, selector_fixpoints

ENVELOPE_SYMBOLS = ("bot", "top", "meet", "join")


class ContextError(AlgebraError):
    pass


class ThetaAxiomError(AlgebraError):
    def __init__(self, algebra: str, axioms: list[str], image: FiniteAlgebra):
        self.axioms = axioms
        self.image = image
        super().__init__(f"regular-element algebra of {algebra} fails {image.sig.name} axiom '{axioms[0]}'")


class EnvelopeError(AlgebraError):
    pass


def theta_carrier(tr: Translation, a: FiniteAlgebra) -> list[int]:
    """Context-regular elements of ``a``; without a context, the selector fixpoints."""
    return context_regular(tr, a) if tr.context else selector_fixpoints(tr.selector, a)


def theta_image(tr: Translation, a: FiniteAlgebra, name: str | None = None, check_axioms: bool = True) -> FiniteAlgebra:
    """The algebra of regular elements with operations given by the translated symbols."""
    if a.sig != tr.target:
        raise AlgebraError(f"{tr.name} expects {tr.target.name} algebras, got {a.sig.name}")
    carrier = np.asarray(theta_carrier(tr, a), dtype=np.int64)
    pos = np.full(a.size, -1, dtype=np.int64)
    pos[carrier] = np.arange(len(carrier))
    tables = {}
    for sym, k in tr.source.symbols:
        vals = term_function(a, tr.zeta[sym], [f"x{i}" for i in range(1, k + 1)], carrier)
        image = pos[vals]
        if (image < 0).any():
            flat = int(np.argmax((image < 0).ravel()))
            idx = np.unravel_index(flat, vals.shape) if k else ()
            args = ", ".join(a.label(int(carrier[i])) for i in idx)
            raise ContextError(
                f"{a.name}: regular elements are not closed under the image of {sym!r} "
                f"({sym}({args}) = {a.label(int(vals.ravel()[flat]))})"
            )
        tables[sym] = image
    labels = tuple(a.label(int(x)) for x in carrier)
    out = FiniteAlgebra(name or f"theta_{tr.name}({a.name})", tr.source, len(carrier), tables, labels, verify=False)
    if check_axioms:
        bad = failing_axioms(out)
        if bad:
            raise ThetaAxiomError(a.name, bad, out)
    return out


def join_irreducibles(h: FiniteAlgebra) -> list[int]:
    """Nonzero elements with exactly one lower cover, ascending by id."""
    leq = h.leq
    n = h.size
    out = []
    for j in range(n):
        if j == h.bot_index:
            continue
        below = [x for x in range(n) if leq[x, j] and x != j]
        covers = [x for x in below if not any(leq[x, y] and y != x for y in below)]
        if len(covers) == 1:
            out.append(j)
    return out


def boolean_envelope(h: FiniteAlgebra, orientation: str = "down", check: bool = True) -> tuple[FiniteAlgebra, Embedding]:
    """Powerset of the join-irreducibles of ``h`` with an interior operator; u goes to the irreducibles below u.

    With orientation "down", []S is the set of j whose whole down-set (in
    the order of h) lies in S, so the embedded elements are exactly the
    opens.  The "up" orientation is kept only to show that it breaks the
    implication clause checked below.  ``check=False`` skips the
    embedding and implication checks and returns the raw construction.
    """
    if h.sig.name not in ("HA", "BA"):
        raise AlgebraError(f"envelope needs a Heyting algebra, got {h.sig.name}")
    failing = failing_axioms(h, HA)
    if failing:
        raise AlgebraError(f"{h.name} fails Heyting axiom '{failing[0]}'")
    if h.size == 1:
        triv = trivial_algebra(S4)
        return triv, Embedding(h, triv, (0,), ENVELOPE_SYMBOLS)
    js = join_irreducibles(h)
    leq = h.leq
    m = len(js)
    if orientation == "down":
        rel = [[int(leq[js[y], js[x]]) for y in range(m)] for x in range(m)]
    elif orientation == "up":
        rel = [[int(leq[js[x], js[y]]) for y in range(m)] for x in range(m)]
    else:
        raise ValueError("orientation must be 'down' or 'up'")
    frame = FiniteFrame("preorder", m, tuple(map(tuple, rel)))
    env = preorder_s4_algebra(frame, name=f"B({h.name})")
    emb_map = tuple(sum(1 << i for i, j in enumerate(js) if leq[j, u]) for u in range(h.size))
    emb = Embedding(h, env, emb_map, ENVELOPE_SYMBOLS)
    if not check:
        return env, emb
    probs = emb.problems()
    if probs:
        raise EnvelopeError(f"lattice embedding of {h.name} fails: {'; '.join(probs)}")
    bad = envelope_implication_failures(h, env, emb_map)
    if bad:
        c, d = bad[0]
        raise EnvelopeError(f"{orientation} envelope of {h.name}: [](~e(c) | e(d)) != e(c -> d) at c={h.label(c)}, d={h.label(d)}")
    return env, emb


def envelope_implication_failures(h: FiniteAlgebra, env: FiniteAlgebra, emb_map) -> list[tuple[int, int]]:
    """Pairs (c, d) where [](~e(c) | e(d)) differs from e(c -> d)."""
    e = np.asarray(emb_map, dtype=np.int64)
    neg = env.tables["imp"][:, env.bot_index]
    lhs = env.tables["box"][env.tables["join"][neg[e][:, None], e[None, :]]]
    rhs = e[h.tables["imp"]]
    return [(int(c), int(d)) for c, d in zip(*np.nonzero(lhs != rhs))]


def check_unit_iso(h: FiniteAlgebra, cap: int = 16) -> Report:
    """theta_gmt of the envelope of h is isomorphic to h; also the canonical map is that isomorphism."""
    gmt = builtin_translation("gmt")
    env, emb = boolean_envelope(h)
    back = theta_image(gmt, env)
    rep = Report("unit-iso", [h.name])
    iso = is_isomorphic(h, back, cap=cap)
    rep.add(f"{h.name}/iso", iso is not None, None if iso is None else {"algebra": h.name, "map": {h.label(x): back.label(y) for x, y in enumerate(iso)}})
    opens = theta_carrier(gmt, env)
    canonical = tuple(opens.index(emb.map[u]) if emb.map[u] in opens else -1 for u in range(h.size))
    ok = -1 not in canonical and sorted(canonical) == list(range(back.size)) and _is_hom(h, back, canonical)
    rep.add(f"{h.name}/canonical-unit", ok, None)
    return rep


def _is_hom(a, b, m) -> bool:
    from .algebra import is_homomorphism

    return is_homomorphism(a, b, m)


def counit_embedding(m: FiniteAlgebra) -> tuple[int, ...] | None:
    """An S4 embedding of B(theta(m)) into m fixing the open elements, if one exists."""
    gmt = builtin_translation("gmt")
    opens = theta_carrier(gmt, m)
    h = theta_image(gmt, m)
    env, emb = boolean_envelope(h)
    partial = {emb.map[u]: opens[u] for u in range(h.size)}
    found = find_homomorphisms(env, m, partial=partial, injective_only=True, limit=1)
    return found[0] if found else None


def check_counit_embedding(m: FiniteAlgebra) -> Report:
    rep = Report("counit-embedding", [m.name])
    found = counit_embedding(m)
    w = None
    if found is not None:
        w = {"algebra": m.name, "map": list(found)}
    rep.add(f"{m.name}/counit", found is not None, w)
    return rep
