"""The class engine against direct enumeration of formulas."""

import itertools

import numpy as np
import pytest

from pal.adjoint import theta_image
from pal.algebra import term_function, validity_witness
from pal.corpus import builtin_algebra
from pal.lang import corpus_size, formula_corpus, get_signature, variable_pool
from pal.polyatomic import Sequent, regular_elements, sequent_witness
from pal.semantic import algebra_view, build_classes, final_level, mask_classes, sequent_bad_counts
from pal.suites import translation_agreement
from pal.translate import apply_translation, builtin_translation


@pytest.mark.parametrize("name, k, d", [("H3", 1, 2), ("fork5", 2, 1), ("s4_chain2", 1, 2), ("K2", 1, 2), ("o6", 1, 2)])
def test_class_counts_match_corpus(name, k, d):
    a = builtin_algebra(name)
    table = build_classes(a.sig, [algebra_view(name, a, k)], k, d)
    for level in range(d + 1):
        assert table.total(level) == corpus_size(a.sig, k, level)


@pytest.mark.parametrize("name, k, d", [("H3", 1, 2), ("fork5", 2, 1), ("s4_chain2", 1, 2), ("K2", 1, 2)])
def test_class_vectors_match_evaluation(name, k, d):
    a = builtin_algebra(name)
    view = algebra_view(name, a, k)
    table = build_classes(a.sig, [view], k, d)
    names = variable_pool(k)
    for i, rep in enumerate(table.reps):
        assert np.array_equal(table.vectors[0][i], term_function(a, rep, names).ravel())
    # every formula lands in a class with its own vector
    vecs = {table.vectors[0][i].tobytes() for i in range(table.size)}
    for t in formula_corpus(a.sig, k, d):
        assert term_function(a, t, names).ravel().astype(table.vectors[0].dtype).tobytes() in vecs


@pytest.mark.parametrize("name, k, d", [("H3", 1, 2), ("fork5", 1, 2), ("s4_cluster2", 2, 2)])
def test_final_level_valid_count_matches_brute_force(name, k, d):
    a = builtin_algebra(name)
    brute = sum(validity_witness(a, t) is None for t in formula_corpus(a.sig, k, d) if _depth_is(t, d))
    table = build_classes(a.sig, [algebra_view(name, a, k)], k, d - 1)
    engine = 0
    for _, cnt, valid in final_level(table).blocks:
        engine += int(cnt[valid[0]].sum())
    assert engine == brute


def _depth_is(t, d):
    from pal.lang import depth

    return depth(t) == d


@pytest.mark.parametrize(
    "trans, name, k, d",
    [("kgg", "fork5", 1, 2), ("kgg", "H3", 2, 1), ("gmt", "s4_chain2", 1, 2), ("goldblatt", "K2", 1, 2), ("gmt", "s4_cluster2", 2, 1)],
)
def test_translation_agreement_counts_match_brute_force(trans, name, k, d):
    tr = builtin_translation(trans)
    a = builtin_algebra(name)
    image = theta_image(tr, a)
    corpus = formula_corpus(tr.source, k, d)
    valid = sum(validity_witness(image, t) is None for t in corpus)
    agree = all((validity_witness(image, t) is None) == (validity_witness(a, apply_translation(tr, t)) is None) for t in corpus)
    c = translation_agreement(tr, a, k, d)
    assert c.formulas == len(corpus)
    assert c.valid_source == valid
    assert agree and c.disagreements == 0 and c.context_disagreements == 0


def test_broken_selector_disagreement_found():
    from pal.translate import translation_from_dict

    spec = dict(builtin_translation("gmt").to_dict(), selector="x")
    broken = translation_from_dict(spec)
    c = translation_agreement(broken, builtin_algebra("s4_chain2"), 1, 2)
    assert c.disagreements > 0 and c.first is not None
    image = theta_image(broken, builtin_algebra("s4_chain2"))
    phi = c.first
    assert (validity_witness(image, phi) is None) != (validity_witness(builtin_algebra("s4_chain2"), apply_translation(broken, phi)) is None)


@pytest.mark.parametrize("name, sel", [("H3", "~~x"), ("fork5", "~~x"), ("s4_chain2", "[]x")])
def test_sequent_masks_match_brute_force(name, sel):
    from pal.lang import parse_formula

    a = builtin_algebra(name)
    f = parse_formula(sel, a.sig)
    reg = regular_elements(a, f)
    view = algebra_view(name, a, 1, domain=reg)
    mc = mask_classes(a.sig, [view], 1, 1)
    assert int(mc.counts.sum()) == corpus_size(a.sig, 1, 1)
    corpus = formula_corpus(a.sig, 1, 1)
    brute = sum(sequent_witness(a, Sequent((p,), c), reg) is None for p, c in itertools.product(corpus, repeat=2))
    bad = sequent_bad_counts(mc.masks[0], mc.masks[0])
    engine = int(np.outer(mc.counts, mc.counts)[bad == 0].sum())
    assert engine == brute


@pytest.mark.parametrize("sig", ["HA", "S4", "KTB", "Ort"])
def test_mask_counts_depth2(sig):
    s = get_signature(sig)
    a = {"HA": "H3", "S4": "s4_chain2", "KTB": "K2", "Ort": "mo2"}[sig]
    mc = mask_classes(s, [algebra_view(a, builtin_algebra(a), 2)], 2, 2)
    assert int(mc.counts.sum()) == corpus_size(s, 2, 2)


def test_counts_beyond_int64_are_refused():
    from pal.suites import pat_invariance_suite

    tr = builtin_translation("kgg")
    with pytest.raises(OverflowError, match="64-bit"):
        translation_agreement(tr, builtin_algebra("fork5"), 2, 5)
    with pytest.raises(OverflowError, match="two-premise"):
        pat_invariance_suite(depth=3)
