import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pal.algebra import (
    AlgebraError,
    AxiomError,
    Embedding,
    FiniteAlgebra,
    ValuationLimitError,
    algebra_from_dict,
    algebra_to_dict,
    axiom_suite,
    closure,
    closure_terms,
    congruence_generated,
    direct_product,
    enumerate_congruences,
    equation_witness,
    evaluate,
    failing_axioms,
    find_homomorphisms,
    generated_subalgebra,
    is_congruence,
    is_homomorphism,
    is_isomorphic,
    quasiequation_witness,
    quotient,
    satisfies_equation,
    term_function,
    trivial_algebra,
    validates,
    validity_witness,
)
from pal.corpus import builtin_algebra, builtin_corpus, heyting_chain
from pal.lang import HA, S4, Var, parse_equation, parse_formula, parse_quasiequation, substitute
from pal.suites import brute_force_congruences
from strategies import terms, valuations

H3 = builtin_algebra("H3")
B2 = builtin_algebra("B2")
B4 = builtin_algebra("B4")
FORK5 = builtin_algebra("fork5")


def chain3_tables(imp_override=None):
    n = 3
    meet = np.minimum.outer(np.arange(n), np.arange(n))
    join = np.maximum.outer(np.arange(n), np.arange(n))
    imp = np.where(np.arange(n)[:, None] <= np.arange(n)[None, :], n - 1, np.arange(n)[None, :])
    if imp_override is not None:
        imp = imp_override
    return {"bot": np.asarray(0), "top": np.asarray(n - 1), "meet": meet, "join": join, "imp": imp}


class TestConstruction:
    def test_h3_values(self):
        a = H3.index("a")
        neg = parse_formula("~p", HA)
        assert H3.label(evaluate(H3, neg, {"p": a})) == "0"
        assert H3.label(evaluate(H3, parse_formula("~~p", HA), {"p": a})) == "1"

    def test_chain_matches_builtin(self):
        assert is_isomorphic(heyting_chain(3), H3) is not None

    def test_bad_implication_names_axiom(self):
        bad = chain3_tables(np.full((3, 3), 2))
        with pytest.raises(AxiomError, match="residuation"):
            FiniteAlgebra("broken", HA, 3, bad)

    def test_table_not_total(self):
        t = chain3_tables()
        t["meet"] = t["meet"][:2]
        with pytest.raises(AlgebraError, match="table not total"):
            FiniteAlgebra("short", HA, 3, t)

    def test_entries_out_of_range(self):
        t = chain3_tables()
        t["join"] = t["join"] + 5
        with pytest.raises(AlgebraError, match="outside"):
            FiniteAlgebra("wild", HA, 3, t)

    def test_tables_read_only(self):
        with pytest.raises(ValueError):
            H3.tables["meet"][0, 0] = 1

    def test_axiom_suites_nonempty(self):
        for sig in ("HA", "BA", "S4", "KTB", "Ort"):
            names = [n for n, _ in axiom_suite(sig)]
            assert names and len(set(names)) == len(names)

    def test_h3_is_not_boolean(self):
        assert "excluded middle" in " ".join(failing_axioms(H3, "BA"))

    def test_json_roundtrip(self):
        for a in (H3, FORK5, builtin_algebra("o6"), builtin_algebra("s4_chain2")):
            b = algebra_from_dict(algebra_to_dict(a))
            assert b.name == a.name and b.labels == a.labels
            assert all(np.array_equal(a.tables[s], b.tables[s]) for s in a.tables)


class TestEvaluation:
    @given(terms(HA), valuations(5))
    def test_term_function_agrees_with_evaluate(self, t, v):
        names = ["p", "q", "r"]
        table = term_function(FORK5, t, names)
        assert table[v["p"], v["q"], v["r"]] == evaluate(FORK5, t, v)

    @given(terms(HA), terms(HA), terms(HA), valuations(5))
    def test_compositional(self, t, s1, s2, v):
        # evaluating t[s] at v equals evaluating t at the values of s under v
        inst = substitute(t, {"p": s1, "q": s2})
        inner = {"p": evaluate(FORK5, s1, v), "q": evaluate(FORK5, s2, v), "r": v["r"]}
        assert evaluate(FORK5, inst, v) == evaluate(FORK5, t, inner)

    def test_validity(self):
        assert not validates(H3, parse_formula("~~p -> p", HA))
        w = validity_witness(H3, parse_formula("~~p -> p", HA))
        assert w is not None and H3.label(w["p"]) == "a"
        assert validates(B4, parse_formula("p | ~p", HA))
        assert validates(H3, parse_formula("(p -> q) | (q -> p)", HA))
        assert not validates(FORK5, parse_formula("(p -> q) | (q -> p)", HA))

    def test_equations_and_quasiequations(self):
        assert satisfies_equation(H3, parse_equation("p & (q | r) = (p & q) | (p & r)", HA))
        assert equation_witness(H3, parse_equation("~~p = p", HA)) is not None
        qe = parse_quasiequation("~p = F |- p = T", HA)
        w = quasiequation_witness(H3, qe)
        assert w is not None and H3.label(w["p"]) == "a"
        assert quasiequation_witness(B4, qe) is None

    def test_valuation_limit(self, monkeypatch):
        monkeypatch.setenv("PAL_MAX_VALUATIONS", "10")
        with pytest.raises(ValuationLimitError):
            validates(H3, parse_formula("p & q & r", HA))
        monkeypatch.setenv("PAL_MAX_VALUATIONS", "27")
        assert validates(H3, parse_formula("p & q & r -> p", HA))


class TestSubalgebras:
    @given(st.sets(st.integers(0, 15)), st.sets(st.integers(0, 15)))
    def test_closure_operator_laws(self, xs, ys):
        a = builtin_algebra("s4_cluster2")
        a = direct_product(a, a) if a.size < 16 else a
        xs = {x % a.size for x in xs}
        ys = {y % a.size for y in ys}
        cx = closure(a, xs)
        assert xs <= set(cx)
        assert closure(a, cx) == cx
        assert set(cx) <= set(closure(a, xs | ys))

    def test_generated_subalgebra_is_closed_and_embeds(self):
        sub, emb = generated_subalgebra(FORK5, [FORK5.index(FORK5.labels[1])])
        emb.check()
        assert failing_axioms(sub) == []

    def test_closure_terms_denote_their_elements(self):
        seed = {1: Var("g1")}
        found = closure_terms(FORK5, seed)
        assert sorted(found) == closure(FORK5, [1])
        for x, t in found.items():
            assert evaluate(FORK5, t, {"g1": 1}) == x


class TestProducts:
    def test_size_and_axioms(self):
        p = direct_product(H3, B2)
        assert p.size == 6 and failing_axioms(p) == []

    def test_projections_are_homomorphisms(self):
        p = direct_product(H3, FORK5)
        first = [x // FORK5.size for x in range(p.size)]
        second = [x % FORK5.size for x in range(p.size)]
        assert is_homomorphism(p, H3, first)
        assert is_homomorphism(p, FORK5, second)

    @given(terms(HA, names=("p", "q"), max_leaves=6))
    def test_validity_is_conjunction(self, t):
        p = direct_product(H3, B2)
        assert validates(p, t) == (validates(H3, t) and validates(B2, t))


class TestHomomorphisms:
    def test_h3_collapse_onto_b2(self):
        # a -> 1 is the quotient by {{0}, {a, 1}}, a homomorphism
        zero, a, one = (H3.index(x) for x in ("0", "a", "1"))
        h = [0] * 3
        h[zero], h[a], h[one] = B2.index("0"), B2.index("1"), B2.index("1")
        assert is_homomorphism(H3, B2, h)
        h[a] = B2.index("0")
        assert not is_homomorphism(H3, B2, h)

    def test_find_homomorphisms_commute_with_terms(self):
        homs = find_homomorphisms(FORK5, H3)
        assert homs
        for h in homs:
            for t in (parse_formula(s, HA) for s in ("p -> q", "~p | q", "~~(p & q)")):
                tab_a = term_function(FORK5, t, ["p", "q"])
                tab_b = term_function(H3, t, ["p", "q"])
                for x, y in itertools.product(range(FORK5.size), repeat=2):
                    assert h[tab_a[x, y]] == tab_b[h[x], h[y]]

    def test_find_homomorphisms_against_brute_force(self):
        for a, b in [(H3, B2), (B2, H3), (B4, H3), (H3, H3)]:
            brute = [h for h in itertools.product(range(b.size), repeat=a.size) if is_homomorphism(a, b, h)]
            assert sorted(find_homomorphisms(a, b)) == sorted(brute)

    def test_isomorphism(self):
        assert is_isomorphic(B4, builtin_algebra("H2x2")) is not None
        assert is_isomorphic(B4, FORK5) is None
        assert is_isomorphic(H3, B2) is None

    def test_embedding_problems(self):
        assert Embedding(B2, H3, (0, 0)).problems()
        assert not Embedding(B2, B4, (B4.bot_index, B4.top_index)).problems()


class TestCongruences:
    def test_h3_has_three(self):
        cong = enumerate_congruences(H3)
        assert len(cong) == 3
        assert cong[0] == ((0,), (1,), (2,)) and cong[-1] == ((0, 1, 2),)

    @pytest.mark.parametrize("name", ["B2", "H3", "B4", "fork5", "s4_chain2", "s4_cluster2", "K2", "o6", "mo2"])
    def test_against_brute_force(self, name):
        a = builtin_algebra(name)
        assert enumerate_congruences(a) == brute_force_congruences(a)

    def test_quotient_map_is_homomorphism(self):
        for c in enumerate_congruences(FORK5):
            qa = quotient(FORK5, c)
            lab = {x: i for i, block in enumerate(sorted(c)) for x in block}
            assert is_homomorphism(FORK5, qa, [lab[x] for x in range(FORK5.size)])

    def test_generated_congruence_is_least(self):
        for x, y in itertools.combinations(range(FORK5.size), 2):
            g = congruence_generated(FORK5, [(x, y)])
            assert is_congruence(FORK5, g)
            for c in enumerate_congruences(FORK5):
                if any(x in b and y in b for b in c):
                    assert all(any(set(gb) <= set(cb) for cb in c) for gb in g)

    def test_not_a_congruence(self):
        with pytest.raises(AlgebraError):
            quotient(H3, ((0, 1), (2,)))


def test_trivial_algebras_pass_axioms():
    for sig in ("HA", "BA", "S4", "KTB", "Ort"):
        assert failing_axioms(trivial_algebra(sig)) == []


def test_corpus_axioms_s4():
    for a in builtin_corpus("preorder_s4", 3):
        assert a.sig == S4 and failing_axioms(a) == []
