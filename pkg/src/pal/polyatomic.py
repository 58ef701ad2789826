"""Regular elements, regularly generated subalgebras and validity restricted to regular valuations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    Embedding,
    FiniteAlgebra,
    closure_terms,
    generated_subalgebra,
    terms_function,
)
from .lang import (
    Signature,
    Substitution,
    Term,
    Var,
    check_term,
    parse_formula,
    render_formula,
    selector_substitution,
    substitute,
    variables,
)


@dataclass(frozen=True)
class Sequent:
    premises: tuple[Term, ...]
    conclusion: Term

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for t in (*self.premises, self.conclusion):
            for v in variables(t):
                seen.setdefault(v)
        return list(seen)

    def map(self, fn) -> "Sequent":
        return Sequent(tuple(fn(t) for t in self.premises), fn(self.conclusion))

    def __str__(self):
        return f"{', '.join(render_formula(t) for t in self.premises)} |- {render_formula(self.conclusion)}".lstrip()


def parse_sequent(text: str, sig: Signature | str) -> Sequent:
    """"phi1, phi2 |- psi"; a bare formula is a sequent without premises."""
    if "|-" not in text:
        return Sequent((), parse_formula(text, sig))
    left, right = text.split("|-", 1)
    prem = tuple(parse_formula(p, sig) for p in left.split(",") if p.strip())
    return Sequent(prem, parse_formula(right, sig))


def regular_elements(a: FiniteAlgebra, f: Term) -> list[int]:
    """Fixpoints of the unary term f."""
    check_term(f, a.sig)
    table = a.unary(f)
    return [int(x) for x in np.flatnonzero(table == np.arange(a.size))]


def regular_subalgebra(a: FiniteAlgebra, f: Term) -> tuple[FiniteAlgebra, Embedding]:
    return generated_subalgebra(a, regular_elements(a, f), name=f"<{a.name}^f>")


def is_regularly_generated(a: FiniteAlgebra, f: Term) -> bool:
    return regular_subalgebra(a, f)[0].size == a.size


def sequent_witness(a: FiniteAlgebra, s: Sequent, domain=None) -> dict[str, int] | None:
    """First valuation into ``domain`` where every premise is top but the conclusion is not."""
    names = s.variables()
    dom = np.arange(a.size) if domain is None else np.asarray(domain, dtype=np.int64)
    if len(dom) == 0:
        return None
    vals = terms_function(a, [*s.premises, s.conclusion], names, dom)
    top = a.top_index
    bad = vals[-1] != top
    for v in vals[:-1]:
        bad = bad & (v == top)
    if not bad.any():
        return None
    idx = np.unravel_index(int(np.argmax(bad)), bad.shape) if bad.ndim else ()
    return {n: int(dom[i]) for n, i in zip(names, idx)}


def sequent_holds(a: FiniteAlgebra, s: Sequent) -> bool:
    return sequent_witness(a, s) is None


def pat_witness(a: FiniteAlgebra, f: Term, s: Sequent) -> dict[str, int] | None:
    return sequent_witness(a, s, regular_elements(a, f))


def pat_validates(a: FiniteAlgebra, f: Term, s: Sequent | Term) -> bool:
    """Validity of ``s`` when variables range over f-regular elements only."""
    if not isinstance(s, Sequent):
        s = Sequent((), s)
    return pat_witness(a, f, s) is None


def selector_variant(f: Term, s: Sequent) -> Sequent:
    sub = selector_substitution(f, s.variables())
    return s.map(lambda t: substitute(t, sub))


def pat_variant_entails(corpus: Sequence[FiniteAlgebra], f: Term, s: Sequent | Term) -> bool:
    """Ordinary validity of the selector-substituted sequent on every algebra of the corpus."""
    if not isinstance(s, Sequent):
        s = Sequent((), s)
    v = selector_variant(f, s)
    return all(sequent_holds(a, v) for a in corpus)


def is_core_superalgebra(e: Embedding, f: Term) -> bool:
    """Does the embedding carry the source's regular elements exactly onto the target's?"""
    e.check()
    image = sorted(e.map[x] for x in regular_elements(e.source, f))
    return image == regular_elements(e.target, f)


@dataclass(frozen=True)
class SubstitutionWitness:
    """A failure of phi on <A^f> turned into a failing instance under a regular valuation of A."""

    substitution: Substitution
    valuation: dict[str, int]
    instance: Term


def substitution_witness(a: FiniteAlgebra, f: Term, phi: Term) -> SubstitutionWitness | None:
    """None if phi holds on <A^f>; otherwise a substitution into generator terms and a regular valuation.

    Each element of the regular subalgebra is recorded as a term over the
    regular generators g1, g2, ... during closure; mapping every variable
    of phi to the term of its failing value gives an instance of phi that
    fails in A at the valuation g_i -> i-th regular generator.
    """
    sub, emb = regular_subalgebra(a, f)
    names = variables(phi)
    from .algebra import validity_witness

    w = validity_witness(sub, phi)
    if w is None:
        return None
    consts = {int(a.tables[c]) for c in a.sig.constants}
    gens = [r for r in regular_elements(a, f) if r not in consts]
    seed = {r: Var(f"g{i + 1}") for i, r in enumerate(gens)}
    terms = closure_terms(a, seed)
    mapping = {p: terms[emb.map[w[p]]] for p in names}
    inst = substitute(phi, mapping)
    valuation = {f"g{i + 1}": r for i, r in enumerate(gens) if f"g{i + 1}" in variables(inst)}
    return SubstitutionWitness(Substitution(mapping), valuation, inst)
