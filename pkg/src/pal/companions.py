"""Desk-scale companion maps: tau, rho, sigma, schematic validity and core-closure checks.

Everything here is relative to explicit finite corpora; reports name the
corpus they were computed on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .adjoint import boolean_envelope, theta_image
from .algebra import (
    Embedding,
    FiniteAlgebra,
    find_homomorphisms,
    is_isomorphic,
    validates,
    validity_witness,
)
from .lang import Signature, Term, check_term, get_signature, parse_formula, render_formula
from .polyatomic import is_core_superalgebra, pat_validates, regular_subalgebra
from .report import Report, valuation_witness
from .translate import Translation, apply_translation

ISO_CAP = 16


@dataclass(frozen=True)
class AxiomSet:
    """Finitely many formulas, each read as an equation with top."""

    sig: Signature
    axioms: tuple[Term, ...] = ()

    def __post_init__(self):
        for t in self.axioms:
            check_term(t, self.sig)

    @classmethod
    def parse(cls, sig, texts: Sequence[str]) -> "AxiomSet":
        sig = get_signature(sig)
        return cls(sig, tuple(parse_formula(t, sig) for t in texts))


def tau_membership(tr: Translation, a: FiniteAlgebra, k: AxiomSet) -> bool:
    """Does the regular-element algebra of ``a`` validate every axiom?"""
    image = theta_image(tr, a)
    return all(validates(image, t) for t in k.axioms)


@dataclass
class RhoResult:
    algebras: list[FiniteAlgebra]
    undeduplicated: list[str]


def rho_images(tr: Translation, corpus: Sequence[FiniteAlgebra]) -> RhoResult:
    """Regular-element algebras of the corpus, one per isomorphism type (up to the size cap)."""
    kept: list[FiniteAlgebra] = []
    big: list[str] = []
    for a in corpus:
        img = theta_image(tr, a)
        if img.size > ISO_CAP:
            kept.append(img)
            big.append(img.name)
            continue
        if any(b.size <= ISO_CAP and is_isomorphic(img, b) is not None for b in kept):
            continue
        kept.append(img)
    return RhoResult(kept, big)


def rho_corpus(tr: Translation, corpus: Sequence[FiniteAlgebra]) -> list[FiniteAlgebra]:
    return rho_images(tr, corpus).algebras


def sigma_corpus(source: Sequence[FiniteAlgebra]) -> list[FiniteAlgebra]:
    """Boolean envelopes of Heyting algebras: generators of the greatest-companion side."""
    return [boolean_envelope(h)[0] for h in source]


def _all_valid(corpus, t) -> tuple[bool, dict | None]:
    for a in corpus:
        w = validity_witness(a, t)
        if w is not None:
            return False, valuation_witness(a, w)
    return True, None


def companion_sample_check(
    tr: Translation,
    source_corpus: Sequence[FiniteAlgebra],
    target_corpus: Sequence[FiniteAlgebra],
    formulas: Sequence[Term],
) -> Report:
    """Per formula: validity on the source corpus against validity of its translation on the target corpus."""
    rep = Report(f"companion/{tr.name}", [a.name for a in (*source_corpus, *target_corpus)])
    width = len(str(max(len(formulas) - 1, 0)))
    for i, phi in enumerate(formulas):
        vs, ws = _all_valid(source_corpus, phi)
        vt, wt = _all_valid(target_corpus, apply_translation(tr, phi))
        w = None
        if vs != vt:
            w = ws or wt
        rep.add(f"{i:0{width}d}:{render_formula(phi)}", vs == vt, w)
        rep.extra.setdefault("source_valid", 0)
        rep.extra["source_valid"] += int(vs)
    return rep


def schem_validates(corpus: Sequence[FiniteAlgebra], f: Term, phi: Term) -> bool:
    """phi holds under every valuation in the regular subalgebra of each corpus algebra."""
    return all(validates(regular_subalgebra(b, f)[0], phi) for b in corpus)


def core_embeddings(b: FiniteAlgebra, a: FiniteAlgebra, f: Term, limit: int | None = None) -> list[tuple[int, ...]]:
    """Injective homomorphisms b -> a that are core superalgebra embeddings for f."""
    if b.sig != a.sig or b.size > a.size:
        return []
    out = []
    for m in find_homomorphisms(b, a, injective_only=True):
        if is_core_superalgebra(Embedding(b, a, m), f):
            out.append(m)
            if limit is not None and len(out) >= limit:
                break
    return out


def tau_rho_core_closure_check(tr: Translation, corpus_k: Sequence[FiniteAlgebra], candidate: FiniteAlgebra) -> Report:
    """(i) theta(candidate) is isomorphic to some theta(b), b in K; (ii) some b in K core-embeds into candidate."""
    rep = Report("tau-rho-closure", [b.name for b in corpus_k] + [candidate.name])
    image = theta_image(tr, candidate)
    hits = [r.name for r in rho_corpus(tr, corpus_k) if r.size == image.size and is_isomorphic(image, r, cap=max(ISO_CAP, image.size)) is not None]
    in_tau_rho = bool(hits)
    core_from = None
    for b in corpus_k:
        found = core_embeddings(b, candidate, tr.selector, limit=1)
        if found:
            core_from = {"algebra": b.name, "map": {b.label(x): candidate.label(y) for x, y in enumerate(found[0])}}
            break
    in_closure = core_from is not None
    rep.add(f"{candidate.name}/agree", in_tau_rho == in_closure, {"tau_rho": in_tau_rho, "core_closure": in_closure, "iso_to": hits, "core_embedding": core_from})
    rep.extra.update({"tau_rho": in_tau_rho, "core_closure": in_closure})
    return rep


def core_saturation(
    target_corpus: Sequence[FiniteAlgebra], candidates: Sequence[FiniteAlgebra], f: Term
) -> list[FiniteAlgebra]:
    """The corpus plus every candidate that is a core superalgebra of some corpus member."""
    out = list(target_corpus)
    for c in candidates:
        if any(c is a for a in out):
            continue
        if any(core_embeddings(b, c, f, limit=1) for b in target_corpus):
            out.append(c)
    return out


def f_minimality_check(
    tr: Translation,
    target_corpus: Sequence[FiniteAlgebra],
    formulas: Sequence[Term],
    candidates: Sequence[FiniteAlgebra] = (),
) -> Report:
    """Formulas valid on the corpus that fail on its core-superalgebra saturation.

    A nonempty separation shows that the corpus logic's models are not
    closed under core superalgebras, which is evidence against minimality.
    Each check also records validity restricted to regular valuations on
    the saturation, which core superalgebras preserve.
    """
    f = tr.selector
    sat = core_saturation(target_corpus, candidates, f)
    rep = Report(f"f-minimality/{tr.name}", [a.name for a in sat])
    separation = []
    width = len(str(max(len(formulas) - 1, 0)))
    for i, phi in enumerate(formulas):
        on_corpus, _ = _all_valid(target_corpus, phi)
        on_sat, w = _all_valid(sat, phi)
        pat_sat = all(pat_validates(a, f, phi) for a in sat)
        separates = on_corpus and not on_sat
        if separates:
            separation.append(render_formula(phi))
        rep.add(
            f"{i:0{width}d}:{render_formula(phi)}",
            not separates,
            {"corpus": on_corpus, "saturation": on_sat, "pat_saturation": pat_sat, "failure": w} if separates else None,
        )
    rep.extra["saturation_added"] = [a.name for a in sat[len(target_corpus):]]
    rep.extra["separation"] = separation
    return rep
