"""Named verification suites; each returns a Report and is exhaustive within its bounds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .adjoint import (
    boolean_envelope,
    check_counit_embedding,
    check_unit_iso,
    envelope_implication_failures,
    theta_carrier,
    theta_image,
)
from .algebra import (
    FiniteAlgebra,
    direct_product,
    enumerate_congruences,
    failing_axioms,
    generated_subalgebra,
    is_congruence,
    term_function,
    validity_witness,
)
from .companions import (
    schem_validates,
    tau_rho_core_closure_check,
)
from .corpus import builtin_algebra, builtin_corpus
from .lang import (
    Signature,
    Term,
    corpus_size,
    get_signature,
    iter_formulas,
    parse_formula,
    render_formula,
    variable_pool,
)
from .polyatomic import (
    Sequent,
    is_core_superalgebra,
    pat_validates,
    regular_elements,
    regular_subalgebra,
    substitution_witness,
)
from .report import Report, valuation_witness
from .semantic import (
    View,
    algebra_view,
    build_classes,
    check_count_range,
    final_level,
    level_term,
    mask_classes,
    sequent_bad_counts,
)
from .translate import (
    BUILTIN_TRANSLATIONS,
    Translation,
    apply_translation,
    builtin_translation,
    check_selectivity,
    check_selector_idempotent,
    context_regular,
    selector_fixpoints,
    zeta_table,
)

# corpus each builtin translation is verified on by default: (family, bound)
DEFAULT_CORPUS = {"kgg": ("poset_heyting", 4), "gmt": ("preorder_s4", 3), "goldblatt": ("rs_ktb", 3)}

SELECTORS = {
    "HA": ["x", "~~x"],
    "BA": ["x"],
    "S4": ["x", "[]x", "[]<>x", "<>[]x"],
    "KTB": ["x", "[]<>x"],
    "Ort": ["x"],
}

# corpora for the selector-level suites: (family, bound)
PAT_CORPORA = [("poset_heyting", 4), ("boolean", 8), ("preorder_s4", 3), ("rs_ktb", 3), ("ortholattices", 8)]


def default_corpus(tr: Translation, bound: int | None = None) -> list[FiniteAlgebra]:
    fam, b = DEFAULT_CORPUS.get(tr.name, (None, None))
    if fam is None:
        raise ValueError(f"no default corpus for {tr.name}; pass a family")
    return builtin_corpus(fam, bound or b)


def selectors_for(sig: Signature) -> list[Term]:
    return [parse_formula(s, sig) for s in SELECTORS[sig.name]]


# --- translation theorem -----------------------------------------------------------


@dataclass
class AgreementCount:
    formulas: int = 0
    valid_source: int = 0
    disagreements: int = 0
    context_disagreements: int = 0
    first: Term | None = None
    first_context: Term | None = None


def translation_views(tr: Translation, a: FiniteAlgebra, num_vars: int) -> list[View]:
    """theta(a) itself; a under translated operations with selected atoms; the same over context-regular atoms."""
    image = theta_image(tr, a)
    ops = {s: zeta_table(tr, a, s) for s, _ in tr.source.symbols}
    sel = a.unary(tr.selector)
    return [
        algebra_view("theta", image, num_vars),
        algebra_view("selective", a, num_vars, atom_map=sel, ops=ops),
        algebra_view("context", a, num_vars, domain=context_regular(tr, a), ops=ops),
    ]


def translation_agreement(tr: Translation, a: FiniteAlgebra, num_vars: int, depth: int) -> AgreementCount:
    """Compare validity of every source formula on theta(a) with validity of its translation on a."""
    views = translation_views(tr, a, num_vars)
    out = AgreementCount()

    def tally(cnt, valid, term_at):
        th, sel, ctx = valid
        out.formulas += int(cnt.sum())
        out.valid_source += int(cnt[th].sum())
        bad = (th != sel) & (cnt > 0)
        out.disagreements += int(cnt[bad].sum())
        if bad.any() and out.first is None:
            out.first = term_at(np.argwhere(bad)[0])
        badc = (sel != ctx) & (cnt > 0)
        out.context_disagreements += int(cnt[badc].sum())
        if badc.any() and out.first_context is None:
            out.first_context = term_at(np.argwhere(badc)[0])

    if depth == 0:
        table = build_classes(tr.source, views, num_vars, 0)
        tally(table.counts[0], [table.valid(w) for w in range(3)], lambda i: table.reps[int(i[0])])
        return out
    table = build_classes(tr.source, views, num_vars, depth - 1)
    tally(table.counts[depth - 1], [table.valid(w) for w in range(3)], lambda i: table.reps[int(i[0])])
    for sym, cnt, valid in final_level(table).blocks:
        tally(cnt, valid, lambda i, sym=sym: level_term(table, sym, tuple(int(x) for x in i)))
    return out


def translation_theorem_suite(
    tr: Translation, corpus: Sequence[FiniteAlgebra], num_vars: int = 2, depth: int = 3
) -> Report:
    rep = Report(f"translation-theorem/{tr.name}", [a.name for a in corpus])
    total = 0
    for a in corpus:
        c = translation_agreement(tr, a, num_vars, depth)
        total += c.formulas
        w = None
        if c.first is not None:
            phi = c.first
            image = theta_image(tr, a)
            w = {
                "algebra": a.name,
                "formula": render_formula(phi),
                "source_valid": validity_witness(image, phi) is None,
                "translation_valid": validity_witness(a, apply_translation(tr, phi)) is None,
            }
        rep.add(f"{a.name}/selective", c.disagreements == 0, w)
        wc = None if c.first_context is None else {"algebra": a.name, "formula": render_formula(c.first_context)}
        rep.add(f"{a.name}/context-mode", c.context_disagreements == 0, wc)
    expected = corpus_size(tr.source, num_vars, depth)
    rep.extra.update(
        {
            "translation": tr.name,
            "num_vars": num_vars,
            "depth": depth,
            "formulas_per_algebra": expected,
            "formula_checks": total,
        }
    )
    # every formula of the corpus must have been counted exactly once per algebra
    rep.add("formula-count", total == expected * len(corpus), {"counted": total, "expected": expected * len(corpus)})
    return rep


# --- regular-element functor -------------------------------------------------------


def theta_fixpoint_suite(tr: Translation, corpus: Sequence[FiniteAlgebra]) -> Report:
    rep = Report(f"theta-fixpoint/{tr.name}", [a.name for a in corpus])
    for a in corpus:
        carrier = theta_carrier(tr, a)
        fix = selector_fixpoints(tr.selector, a)
        image = theta_image(tr, a, check_axioms=False)
        ok = carrier == fix and list(image.labels) == [a.label(x) for x in fix]
        w = None if ok else {"algebra": a.name, "context_regular": [a.label(x) for x in carrier], "fixpoints": [a.label(x) for x in fix]}
        rep.add(f"{a.name}", ok, w)
    return rep


def goldblatt_image_suite(corpus: Sequence[FiniteAlgebra]) -> Report:
    tr = builtin_translation("goldblatt")
    rep = Report("goldblatt-image", [a.name for a in corpus])
    for a in corpus:
        image = theta_image(tr, a, check_axioms=False)
        bad = failing_axioms(image, "Ort")
        rep.add(f"{a.name}", not bad, {"algebra": a.name, "failing": bad} if bad else None)
        rep.extra.setdefault("image_sizes", {})[a.name] = image.size
    return rep


def unit_iso_suite(corpus: Sequence[FiniteAlgebra]) -> Report:
    rep = Report("unit-iso", [h.name for h in corpus])
    pairs = 0
    for h in corpus:
        env, emb = boolean_envelope(h)
        bad = envelope_implication_failures(h, env, emb.map)
        pairs += h.size * h.size
        rep.add(f"{h.name}/envelope-implication", not bad, None if not bad else {"algebra": h.name, "pair": [h.label(bad[0][0]), h.label(bad[0][1])]})
        rep.add(f"{h.name}/envelope-lattice-embedding", not emb.problems(), None)
        rep.extend(check_unit_iso(h))
    rep.extra["implication_pairs"] = pairs
    return rep


def counit_suite(corpus: Sequence[FiniteAlgebra]) -> Report:
    rep = Report("counit-embedding", [m.name for m in corpus])
    for m in corpus:
        rep.extend(check_counit_embedding(m))
    return rep


def selectivity_suite(tr: Translation, corpus: Sequence[FiniteAlgebra]) -> Report:
    rep = Report(f"selectivity/{tr.name}", [a.name for a in corpus])
    rep.extend(check_selector_idempotent(tr, corpus))
    rep.extend(check_selectivity(tr, corpus))
    from .translate import check_context_compatibility

    rep.extend(check_context_compatibility(tr, corpus), prefix="compatible/")
    return rep


# --- regular valuations ------------------------------------------------------------


@dataclass
class SequentVerdicts:
    """Validity of sequents in each view: no premise, one premise, two premises."""

    counts: dict[str, int] = field(default_factory=dict)
    valid: dict[str, list[np.ndarray]] = field(default_factory=dict)
    weights: dict[str, np.ndarray] = field(default_factory=dict)
    describe: dict[str, Callable] = field(default_factory=dict)


def sequent_verdicts(sig: Signature, views: Sequence[View], num_vars: int, depth: int, pair_depth: int | None) -> SequentVerdicts:
    """Verdicts for sequents with up to one premise from the depth corpus, and two from the pair_depth corpus."""
    out = SequentVerdicts()
    n = corpus_size(sig, num_vars, depth)
    check_count_range(n * n, "one-premise sequents")
    if pair_depth is not None:
        check_count_range(corpus_size(sig, num_vars, pair_depth) ** 2 * n, "two-premise sequents")
    mc = mask_classes(sig, views, num_vars, depth)
    masks = mc.masks
    out.valid["0"] = [m.all(axis=1) for m in masks]
    out.weights["0"] = mc.counts
    out.describe["0"] = lambda i: Sequent((), mc.reps[i[0]])
    out.valid["1"] = [sequent_bad_counts(m, m) == 0 for m in masks]
    out.weights["1"] = np.outer(mc.counts, mc.counts)
    out.describe["1"] = lambda i: Sequent((mc.reps[i[0]],), mc.reps[i[1]])
    if pair_depth is not None:
        pc = mask_classes(sig, views, num_vars, pair_depth)
        m1 = pc.size
        prem = [(pm[:, None, :] & pm[None, :, :]).reshape(m1 * m1, -1) for pm in pc.masks]
        out.valid["2"] = [sequent_bad_counts(p, m) == 0 for p, m in zip(prem, masks)]
        out.weights["2"] = np.outer(np.outer(pc.counts, pc.counts).ravel(), mc.counts)
        out.describe["2"] = lambda i: Sequent((pc.reps[i[0] // m1], pc.reps[i[0] % m1]), mc.reps[i[1]])
    for key, w in out.weights.items():
        out.counts[key] = int(w.sum())
    return out


def _compare(sv: SequentVerdicts, left: int, right: int, relation: str = "eq"):
    """Sequents (weighted) where view ``left`` and view ``right`` disagree (or where left does not imply right)."""
    bad_total = 0
    first = None
    for key, valid in sv.valid.items():
        a, b = valid[left], valid[right]
        bad = (a != b) if relation == "eq" else (a & ~b)
        bad &= sv.weights[key] > 0
        bad_total += int(sv.weights[key][bad].sum())
        if first is None and bad.any():
            first = sv.describe[key](tuple(int(x) for x in np.argwhere(bad)[0]))
    return bad_total, first


def pat_views(a: FiniteAlgebra, f: Term, num_vars: int) -> list[View]:
    """Ordinary valuations of the selector-substituted formula; regular valuations on a; on <a^f>."""
    sub, _ = regular_subalgebra(a, f)
    return [
        algebra_view("substituted", a, num_vars, atom_map=a.unary(f)),
        algebra_view("regular", a, num_vars, domain=regular_elements(a, f)),
        algebra_view("generated", sub, num_vars, domain=regular_elements(sub, f)),
    ]


def pat_corpora() -> list[FiniteAlgebra]:
    out = []
    for fam, b in PAT_CORPORA:
        out += builtin_corpus(fam, b)
    return out


def pat_invariance_suite(corpus: Sequence[FiniteAlgebra] | None = None, num_vars: int = 2, depth: int = 2, pair_depth: int | None = None) -> Report:
    """Sequents with up to two premises; premises of two-premise sequents come from the pair_depth corpus (default: depth)."""
    pair_depth = depth if pair_depth is None else pair_depth
    corpus = list(corpus) if corpus is not None else pat_corpora()
    rep = Report("pat-invariance", [a.name for a in corpus])
    totals = {"0": 0, "1": 0, "2": 0}
    for a in corpus:
        for f in selectors_for(a.sig):
            fname = render_formula(f)
            sv = sequent_verdicts(a.sig, pat_views(a, f, num_vars), num_vars, depth, pair_depth)
            for k, v in sv.counts.items():
                totals[k] += v
            bad1, first1 = _compare(sv, 0, 1)
            rep.add(f"{a.name}/{fname}/substitution", bad1 == 0, None if first1 is None else {"algebra": a.name, "selector": fname, "sequent": str(first1), "count": bad1})
            bad3, first3 = _compare(sv, 1, 2)
            rep.add(f"{a.name}/{fname}/generated", bad3 == 0, None if first3 is None else {"algebra": a.name, "selector": fname, "sequent": str(first3), "count": bad3})
    rep.extra.update({"num_vars": num_vars, "depth": depth, "pair_depth": pair_depth, "sequents_by_premises": totals})
    return rep


def _preservation_views(pairs, f, num_vars):
    return [algebra_view(a.name, a, num_vars, domain=regular_elements(a, f)) for a in pairs]


def preservation_suite(
    corpus: Sequence[FiniteAlgebra] | None = None, num_vars: int = 2, depth: int = 2, product_cap: int = 32
) -> Report:
    """Regular-valuation validity passes from <a^f> to a, to subalgebras holding a^f, and to products."""
    corpus = list(corpus) if corpus is not None else pat_corpora()
    rep = Report("preservation", [a.name for a in corpus])
    checked = {"core": 0, "subalgebra": 0, "product": 0}
    for a in corpus:
        for f in selectors_for(a.sig):
            fname = render_formula(f)
            sub, emb = regular_subalgebra(a, f)
            core = is_core_superalgebra(emb, f)
            rep.add(f"{a.name}/{fname}/core-embedding", core, None)
            sv = sequent_verdicts(a.sig, _preservation_views([sub, a], f, num_vars), num_vars, depth, depth)
            bad, first = _compare(sv, 0, 1, "implies")
            checked["core"] += sum(sv.counts.values())
            rep.add(f"{a.name}/{fname}/core", bad == 0, None if first is None else {"algebra": a.name, "sequent": str(first)})
            # every subalgebra generated by the regular elements and one more element
            reg = regular_elements(a, f)
            seen = set()
            for x in range(a.size):
                s, e = generated_subalgebra(a, reg + [x], name=f"<{a.name}^f,{a.label(x)}>")
                if s.size == a.size or e.map in seen:
                    continue
                seen.add(e.map)
                sv = sequent_verdicts(a.sig, _preservation_views([a, s], f, num_vars), num_vars, depth, depth)
                bad, first = _compare(sv, 0, 1, "implies")
                checked["subalgebra"] += sum(sv.counts.values())
                rep.add(f"{a.name}/{fname}/sub/{a.label(x)}", bad == 0 and is_core_superalgebra(e, f), None if first is None else {"algebra": s.name, "sequent": str(first)})
    by_sig: dict[str, list[FiniteAlgebra]] = {}
    for a in corpus:
        by_sig.setdefault(a.sig.name, []).append(a)
    for name, algs in by_sig.items():
        for i, j in itertools.combinations_with_replacement(range(len(algs)), 2):
            a, b = algs[i], algs[j]
            if a.size * b.size > product_cap:
                continue
            p = direct_product(a, b)
            for f in selectors_for(a.sig):
                fname = render_formula(f)
                sv = sequent_verdicts(a.sig, _preservation_views([a, b, p], f, num_vars), num_vars, depth, depth)
                bad = 0
                first = None
                for key, valid in sv.valid.items():
                    m = valid[0] & valid[1] & ~valid[2] & (sv.weights[key] > 0)
                    bad += int(sv.weights[key][m].sum())
                    if first is None and m.any():
                        first = sv.describe[key](tuple(int(x) for x in np.argwhere(m)[0]))
                checked["product"] += sum(sv.counts.values())
                rep.add(f"{p.name}/{fname}/product", bad == 0, None if first is None else {"algebra": p.name, "sequent": str(first)})
    rep.extra.update({"num_vars": num_vars, "depth": depth, "product_cap": product_cap, "sequents_checked": checked})
    return rep


# --- companions --------------------------------------------------------------------


def tau_rho_suite(heyting: Sequence[FiniteAlgebra], candidates: Sequence[FiniteAlgebra]) -> Report:
    gmt = builtin_translation("gmt")
    rep = Report("tau-rho-closure", [h.name for h in heyting] + [c.name for c in candidates])
    both = 0
    for h in heyting:
        env = boolean_envelope(h)[0]
        for c in candidates:
            r = tau_rho_core_closure_check(gmt, [env], c)
            both += int(r.extra["tau_rho"])
            rep.extend(r, prefix=f"{env.name}/")
    rep.extra["pairs"] = len(heyting) * len(candidates)
    rep.extra["pairs_in_closure"] = both
    return rep


def dna_sanity_suite() -> Report:
    h3 = builtin_algebra("H3")
    fork = builtin_algebra("fork5")
    dn = parse_formula("~~x", "HA")
    dne = parse_formula("~~p -> p", "HA")
    lem = parse_formula("p | ~p", "HA")
    rep = Report("dna-sanity", [h3.name, fork.name])
    w = validity_witness(h3, dne)
    rep.add("H3/~~p -> p/invalid", w is not None and h3.label(w["p"]) == "a", valuation_witness(h3, w))
    rep.add("H3/~~p -> p/pat-valid", pat_validates(h3, dn, dne), None)
    rep.add("fork5/p | ~p/not-schematic", not schem_validates([fork], dn, lem), None)
    sw = substitution_witness(fork, dn, lem)
    ok = sw is not None and not pat_validates(fork, dn, sw.instance)
    rep.add("fork5/p | ~p/substitution-witness", ok, None if sw is None else {"algebra": fork.name, "instance": render_formula(sw.instance), "valuation": {k: fork.label(v) for k, v in sw.valuation.items()}})
    return rep


def schem_sanity_suite(corpus: Sequence[FiniteAlgebra] | None = None, formula_depth: int = 2, sub_vars: int = 2, sub_depth: int = 2) -> Report:
    """Schematic validity against substitution instances, for one-variable formulas.

    If phi is schematic, every instance phi(s) with s from the substitution
    corpus must hold under all regular valuations; if it is not, the
    constructed substitution witness must give an instance that fails.
    """
    corpus = list(corpus) if corpus is not None else builtin_corpus("poset_heyting", 3)
    rep = Report("schem-sanity", [a.name for a in corpus])
    instances = 0
    for a in corpus:
        for f in selectors_for(a.sig):
            fname = render_formula(f)
            reg = regular_elements(a, f)
            # values each substitution term takes under regular valuations
            rows = []
            for s_term in iter_formulas(a.sig, sub_vars, sub_depth):
                hit = np.zeros(a.size, dtype=bool)
                hit[term_function(a, s_term, variable_pool(sub_vars), reg).ravel()] = True
                rows.append(hit)
            images = np.unique(np.array(rows), axis=0)
            bad = []
            for phi in iter_formulas(a.sig, 1, formula_depth):
                top_set = term_function(a, phi, ["p1"]) == a.top_index
                if schem_validates([a], f, phi):
                    instances += len(rows)
                    if (images & ~top_set).any():
                        bad.append((phi, "an instance fails"))
                else:
                    sw = substitution_witness(a, f, phi)
                    if sw is None or pat_validates(a, f, sw.instance):
                        bad.append((phi, "no failing instance"))
            w = None if not bad else {"algebra": a.name, "formula": render_formula(bad[0][0]), "problem": bad[0][1]}
            rep.add(f"{a.name}/{fname}", not bad, w)
    rep.extra["instances_checked"] = instances
    return rep


def set_partitions(n: int):
    """All partitions of range(n) as sorted tuples of sorted blocks."""
    def go(i, blocks):
        if i == n:
            yield tuple(sorted(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(i)
            yield from go(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from go(i + 1, blocks)
        blocks.pop()

    yield from go(0, [])


def brute_force_congruences(a: FiniteAlgebra) -> list:
    return sorted((p for p in set_partitions(a.size) if is_congruence(a, p)), key=lambda p: (-len(p), p))


ROUNDTRIP_CORPORA = [("Ort", 1, 3), ("HA", 2, 2), ("BA", 2, 2), ("S4", 2, 2), ("KTB", 2, 2), ("Ort", 2, 2)]


def roundtrip_failures(sig: Signature, num_vars: int, depth: int) -> tuple[int, Term | None]:
    count = 0
    for t in iter_formulas(sig, num_vars, depth):
        count += 1
        if parse_formula(render_formula(t), sig) != t:
            return count, t
    return count, None


def constructed_algebras() -> list[FiniteAlgebra]:
    """Every algebra the suites build: corpora, builtins, envelopes, regular-element images, products."""
    from .corpus import BUILTIN_NAMES

    out = [builtin_algebra(n) for n in BUILTIN_NAMES]
    out += builtin_corpus("heyting_chains", 6) + builtin_corpus("boolean", 16) + builtin_corpus("ortholattices", 8)
    ph = builtin_corpus("poset_heyting", 4)
    s4 = builtin_corpus("preorder_s4", 3)
    kt = builtin_corpus("rs_ktb", 3)
    out += ph + s4 + kt
    out += [boolean_envelope(h)[0] for h in ph]
    for name, corpus in (("kgg", ph), ("gmt", s4), ("goldblatt", kt)):
        out += [theta_image(builtin_translation(name), a, check_axioms=False) for a in corpus]
    out += [regular_subalgebra(a, f)[0] for a in ph + s4 + kt for f in selectors_for(a.sig)]
    out.append(direct_product(builtin_algebra("H3"), builtin_algebra("B2")))
    return out


def infrastructure_suite(roundtrip=None, algebras=None) -> Report:
    rep = Report("infrastructure")
    for name, k, d in roundtrip if roundtrip is not None else ROUNDTRIP_CORPORA:
        sig = get_signature(name)
        count, bad = roundtrip_failures(sig, k, d)
        expected = corpus_size(sig, k, d)
        rep.add(f"roundtrip/{name}/{k}vars/depth{d}", bad is None and count == expected, {"terms": count} if bad is None else {"term": repr(bad)})
    algebras = algebras if algebras is not None else constructed_algebras()
    for a in algebras:
        bad = failing_axioms(a)
        rep.add(f"axioms/{a.sig.name}/{a.name}", not bad, {"algebra": a.name, "failing": bad} if bad else None)
        rep.corpus.append(a.name)
    h3 = builtin_algebra("H3")
    cong = enumerate_congruences(h3)
    oracle = brute_force_congruences(h3)
    rep.add("congruences/H3", len(cong) == 3 and cong == oracle, {"algebra": "H3", "congruences": [list(map(list, c)) for c in cong]})
    return rep


SUITES = (
    "translation-theorem",
    "theta-fixpoint",
    "unit-iso",
    "counit-embedding",
    "goldblatt-image",
    "pat-invariance",
    "preservation",
    "tau-rho-closure",
    "selectivity",
    "schem-sanity",
    "dna-sanity",
    "infrastructure",
)


@dataclass
class SuiteOptions:
    """Command-line knobs shared by the suites; None means the suite default."""

    trans: Translation | None = None
    family: str | None = None
    bound: int | None = None
    depth: int | None = None
    num_vars: int | None = None


class SuiteError(ValueError):
    pass


def _family_corpus(opts: SuiteOptions, family: str, bound: int) -> list[FiniteAlgebra]:
    return builtin_corpus(opts.family or family, opts.bound or bound)


def _translations_for(opts: SuiteOptions) -> list[tuple[Translation, list[FiniteAlgebra]]]:
    """Translations to run, each with its corpus (the family's signature must match the target)."""
    trs = [opts.trans] if opts.trans is not None else [builtin_translation(n) for n in BUILTIN_TRANSLATIONS]
    out = []
    for tr in trs:
        if opts.family is not None:
            corpus = builtin_corpus(opts.family, opts.bound or DEFAULT_CORPUS.get(tr.name, (None, 3))[1])
            if corpus and corpus[0].sig != tr.target:
                if opts.trans is not None:
                    raise SuiteError(f"family {opts.family} has {corpus[0].sig.name} algebras but {tr.name} targets {tr.target.name}")
                continue
        else:
            corpus = default_corpus(tr, opts.bound)
        out.append((tr, corpus))
    if not out:
        raise SuiteError(f"no builtin translation targets the algebras of family {opts.family}")
    return out


def _per_translation(name: str, opts: SuiteOptions, fn) -> Report:
    runs = _translations_for(opts)
    if len(runs) == 1:
        return fn(*runs[0])
    rep = Report(name)
    for tr, corpus in runs:
        sub = fn(tr, corpus)
        rep.extend(sub, prefix=f"{tr.name}/")
        if sub.extra:
            rep.extra[tr.name] = sub.extra
    return rep


def run_suite(name: str, opts: SuiteOptions | None = None) -> Report:
    """Run a named suite with the given options."""
    opts = opts or SuiteOptions()
    k = opts.num_vars
    if name == "translation-theorem":
        return _per_translation(name, opts, lambda tr, c: translation_theorem_suite(tr, c, k or 2, 3 if opts.depth is None else opts.depth))
    if name == "theta-fixpoint":
        return _per_translation(name, opts, theta_fixpoint_suite)
    if name == "selectivity":
        return _per_translation(name, opts, selectivity_suite)
    if name == "unit-iso":
        return unit_iso_suite(_family_corpus(opts, "poset_heyting", 4))
    if name == "counit-embedding":
        return counit_suite(_family_corpus(opts, "preorder_s4", 3))
    if name == "goldblatt-image":
        return goldblatt_image_suite(_family_corpus(opts, "rs_ktb", 3))
    if name == "pat-invariance":
        corpus = _family_corpus(opts, "", 3) if opts.family else None
        return pat_invariance_suite(corpus, k or 2, 2 if opts.depth is None else opts.depth)
    if name == "preservation":
        corpus = _family_corpus(opts, "", 3) if opts.family else None
        return preservation_suite(corpus, k or 2, 2 if opts.depth is None else opts.depth)
    if name == "tau-rho-closure":
        return tau_rho_suite(_family_corpus(opts, "poset_heyting", 4), builtin_corpus("preorder_s4", 3))
    if name == "schem-sanity":
        return schem_sanity_suite(_family_corpus(opts, "poset_heyting", 3), 2 if opts.depth is None else opts.depth, k or 2)
    if name == "dna-sanity":
        return dna_sanity_suite()
    if name == "infrastructure":
        return infrastructure_suite()
    raise SuiteError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
