import pytest

from pal.adjoint import (
    ContextError,
    EnvelopeError,
    ThetaAxiomError,
    boolean_envelope,
    check_counit_embedding,
    check_unit_iso,
    counit_embedding,
    envelope_implication_failures,
    join_irreducibles,
    theta_carrier,
    theta_image,
)
from pal.algebra import failing_axioms, is_homomorphism, is_isomorphic
from pal.corpus import builtin_algebra, builtin_corpus
from pal.translate import builtin_translation, translation_from_dict

GMT = builtin_translation("gmt")
KGG = builtin_translation("kgg")
GOLDBLATT = builtin_translation("goldblatt")


class TestTheta:
    def test_s4_chain2_gives_three_element_heyting(self):
        img = theta_image(GMT, builtin_algebra("s4_chain2"))
        assert img.size == 3 and img.sig.name == "HA"
        assert is_isomorphic(img, builtin_algebra("H3")) is not None

    def test_kgg_of_b2_is_b2(self):
        img = theta_image(KGG, builtin_algebra("B2"))
        assert img.size == 2 and img.sig.name == "BA"

    def test_kgg_of_fork5_is_b4(self):
        img = theta_image(KGG, builtin_algebra("fork5"))
        assert img.size == 4 and failing_axioms(img) == []

    def test_goldblatt_of_k2(self):
        img = theta_image(GOLDBLATT, builtin_algebra("K2"))
        assert img.sig.name == "Ort" and failing_axioms(img) == []

    def test_discrete_s4_theta_is_whole_algebra(self):
        m = builtin_algebra("s4_discrete2")
        assert theta_carrier(GMT, m) == list(range(m.size))

    @pytest.mark.parametrize("name, family, bound", [("kgg", "poset_heyting", 4), ("gmt", "preorder_s4", 3), ("goldblatt", "rs_ktb", 3)])
    def test_images_pass_source_axioms(self, name, family, bound):
        tr = builtin_translation(name)
        for a in builtin_corpus(family, bound):
            assert failing_axioms(theta_image(tr, a)) == []

    def test_signature_mismatch(self):
        with pytest.raises(Exception, match="expects S4"):
            theta_image(GMT, builtin_algebra("H3"))

    def test_not_closed(self):
        spec = dict(KGG.to_dict(), zeta=dict(KGG.to_dict()["zeta"], join="x1 | x2"))
        with pytest.raises(ContextError, match="not closed"):
            theta_image(translation_from_dict(spec), builtin_algebra("fork5"))

    def test_axiom_failure_reported(self):
        # join sent to meet keeps the opens closed but breaks absorption
        spec = dict(GMT.to_dict(), zeta=dict(GMT.to_dict()["zeta"], join="x1 & x2"))
        with pytest.raises(ThetaAxiomError, match="fails HA axiom"):
            theta_image(translation_from_dict(spec), builtin_algebra("s4_chain2"))


class TestEnvelope:
    def test_join_irreducibles(self):
        h3 = builtin_algebra("H3")
        assert [h3.label(j) for j in join_irreducibles(h3)] == ["a", "1"]
        assert len(join_irreducibles(builtin_algebra("B4"))) == 2
        assert len(join_irreducibles(builtin_algebra("fork5"))) == 3

    def test_h3_envelope_has_four_elements(self):
        env, emb = boolean_envelope(builtin_algebra("H3"))
        assert env.size == 4 and env.sig.name == "S4"
        assert not emb.problems()

    def test_boolean_envelope_of_boolean_is_discrete(self):
        b4 = builtin_algebra("B4")
        env, _ = boolean_envelope(b4)
        assert list(env.tables["box"]) == list(range(env.size))

    def test_implication_clause_every_pair(self):
        for h in builtin_corpus("poset_heyting", 4):
            env, emb = boolean_envelope(h)
            assert envelope_implication_failures(h, env, emb.map) == []

    def test_up_orientation_fails(self):
        # the upward reading of the order breaks the implication clause on a 3-chain
        with pytest.raises(EnvelopeError, match="up envelope"):
            boolean_envelope(builtin_algebra("H3"), orientation="up")

    def test_rejects_non_heyting(self):
        with pytest.raises(Exception, match="Heyting"):
            boolean_envelope(builtin_algebra("K2"))

    def test_trivial(self):
        env, emb = boolean_envelope(builtin_algebra("trivial"))
        assert env.size == 1


class TestUnitCounit:
    @pytest.mark.parametrize("h", builtin_corpus("poset_heyting", 4), ids=lambda a: a.name)
    def test_unit_iso(self, h):
        assert check_unit_iso(h).agreement

    @pytest.mark.parametrize("m", builtin_corpus("preorder_s4", 3), ids=lambda a: a.name)
    def test_counit_embedding(self, m):
        found = counit_embedding(m)
        assert found is not None
        env, _ = boolean_envelope(theta_image(GMT, m))
        assert is_homomorphism(env, m, found) and len(set(found)) == len(found)
        assert check_counit_embedding(m).agreement

    def test_cluster_counit_is_proper(self):
        # the two-world cluster has only bottom and top open: the envelope is B2, embedded properly
        m = builtin_algebra("s4_cluster2")
        found = counit_embedding(m)
        assert len(found) == 2 and m.size == 4
