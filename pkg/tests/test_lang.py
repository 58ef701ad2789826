import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pal.lang import (
    BA,
    BOT,
    HA,
    KTB,
    S4,
    TOP,
    App,
    Const,
    FormulaSyntaxError,
    Ort,
    SignatureError,
    Substitution,
    Var,
    apply_selector,
    box,
    corpus_size,
    depth,
    dia,
    formula_corpus,
    get_signature,
    iter_formulas,
    neg,
    parse_equation,
    parse_formula,
    parse_quasiequation,
    render_formula,
    selector_substitution,
    substitute,
    variables,
)
from strategies import terms

p, q, r = Var("p"), Var("q"), Var("r")


def imp(a, b):
    return App("imp", (a, b))


def join(a, b):
    return App("join", (a, b))


def meet(a, b):
    return App("meet", (a, b))


class TestSignatures:
    def test_builtin_symbols(self):
        assert HA.arity("imp") == 2
        assert "box" in S4 and "box" in KTB and "box" not in HA
        assert "ortho" in Ort and "imp" not in Ort
        assert HA.constants == ("bot", "top")
        assert [s for s, _ in BA.operations] == ["meet", "join", "imp"]

    def test_get_signature(self):
        assert get_signature("S4") is S4
        with pytest.raises(SignatureError):
            get_signature("K4")

    def test_unknown_symbol_arity(self):
        with pytest.raises(SignatureError, match="not in HA"):
            HA.arity("box")


class TestParse:
    def test_precedence(self):
        assert parse_formula("p -> q | r", HA) == imp(p, join(q, r))
        assert parse_formula("p & q | r", HA) == join(meet(p, q), r)
        assert parse_formula("p | q & r", HA) == join(p, meet(q, r))

    def test_implication_right_associative(self):
        assert parse_formula("p -> q -> r", HA) == imp(p, imp(q, r))

    def test_left_associative_lattice_ops(self):
        assert parse_formula("p | q | r", HA) == join(join(p, q), r)
        assert parse_formula("p & q & r", HA) == meet(meet(p, q), r)

    def test_prefix_operators(self):
        assert parse_formula("~p", HA) == neg(p)
        assert parse_formula("[]p", S4) == box(p)
        assert parse_formula("<>p", S4) == dia(p)
        assert parse_formula("~[]~p", S4) == dia(p)
        assert parse_formula("~~p & q", HA) == meet(neg(neg(p)), q)

    def test_constants(self):
        assert parse_formula("T", HA) == TOP
        assert parse_formula("F -> p", HA) == imp(BOT, p)

    def test_ortho_in_ort(self):
        t = parse_formula("~(p & q)", Ort)
        assert t == App("ortho", (meet(p, q),))

    def test_symbol_not_in_signature(self):
        with pytest.raises(FormulaSyntaxError, match=r"symbol \[\] not in HA at position 0"):
            parse_formula("[]p", HA)
        with pytest.raises(FormulaSyntaxError, match="not in Ort"):
            parse_formula("p -> q", Ort)

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("p q", "position 2"),
            ("(p & q", "expected ')'"),
            ("p &", "end of input"),
            ("p $ q", "position 2"),
            ("", "end of input"),
            ("p)", "position 1"),
        ],
    )
    def test_syntax_errors_carry_position(self, text, fragment):
        with pytest.raises(FormulaSyntaxError, match=fragment.replace("(", r"\(").replace(")", r"\)")):
            parse_formula(text, HA)

    def test_equations(self):
        e = parse_equation("p & q = q & p", HA)
        assert e.lhs == meet(p, q) and e.rhs == meet(q, p)
        qe = parse_quasiequation("p = T, q = T |- p & q = T", HA)
        assert len(qe.premises) == 2
        assert str(qe) == "p = T, q = T |- p & q = T"
        assert str(parse_quasiequation("p = p", HA)) == "p = p"


class TestRender:
    @pytest.mark.parametrize(
        "sig, text, rendered",
        [
            (HA, "p -> q | r", "p -> (q | r)"),
            (HA, "(p | q) & r", "(p | q) & r"),
            (HA, "(p -> q) -> r", "(p -> q) -> r"),
            (HA, "~~p -> p", "~~p -> p"),
            (S4, "[](~[]p | []q)", "[](~[]p | []q)"),
            (S4, "~[]~p", "<>p"),
            (KTB, "[]~([]<>p)", "[]~[]<>p"),
            (Ort, "~(p & q)", "~(p & q)"),
        ],
    )
    def test_canonical_rendering(self, sig, text, rendered):
        assert render_formula(parse_formula(text, sig)) == rendered

    @pytest.mark.parametrize("sig", [HA, BA, S4, KTB, Ort])
    def test_roundtrip_small_corpus(self, sig):
        for t in iter_formulas(sig, 2, 2):
            assert parse_formula(render_formula(t), sig) == t

    @pytest.mark.parametrize("sig", [HA, S4, KTB, Ort])
    def test_roundtrip_property(self, sig):
        @given(terms(sig))
        def check(t):
            assert parse_formula(render_formula(t), sig) == t

        check()


class TestSubstitution:
    def test_simultaneous(self):
        s = Substitution({"p": q, "q": p})
        assert substitute(imp(p, q), s) == imp(q, p)

    def test_unmapped_variables_stay(self):
        assert substitute(imp(p, r), {"p": TOP}) == imp(TOP, r)

    @given(terms(HA), terms(HA), terms(HA), terms(HA))
    def test_composition(self, t, a, b, c):
        s1 = Substitution({"p": a, "q": b})
        s2 = Substitution({"p": c, "r": a})
        assert substitute(substitute(t, s1), s2) == substitute(t, s1.compose(s2))

    @given(terms(HA))
    def test_identity(self, t):
        assert substitute(t, Substitution({})) == t
        assert substitute(t, {v: Var(v) for v in variables(t)}) == t

    def test_selector_substitution(self):
        f = parse_formula("~~x", HA)
        assert selector_substitution(f, ["p"]).mapping == {"p": neg(neg(p))}
        assert apply_selector(imp(p, q), f) == imp(neg(neg(p)), neg(neg(q)))

    def test_selector_must_be_unary(self):
        with pytest.raises(SignatureError):
            selector_substitution(parse_formula("x & y", HA), ["p"])


class TestCorpus:
    def test_variables_in_first_occurrence_order(self):
        assert variables(parse_formula("q -> p & q", HA)) == ["q", "p"]

    def test_depth(self):
        assert depth(p) == 0 and depth(TOP) == 0
        assert depth(parse_formula("p -> ~q", HA)) == 2

    @pytest.mark.parametrize(
        "sig, k, d, n",
        [
            (HA, 1, 0, 3),
            (HA, 1, 1, 30),
            (HA, 1, 2, 2703),
            (HA, 1, 3, 21918630),
            (HA, 2, 2, 8116),
            (HA, 2, 3, 197608372),
            (S4, 2, 2, 9468),
            (Ort, 1, 3, 2781264),
            (Ort, 2, 3, 21050320),
        ],
    )
    def test_corpus_size_values(self, sig, k, d, n):
        assert corpus_size(sig, k, d) == n

    @pytest.mark.parametrize("sig, k, d", [(HA, 1, 2), (HA, 2, 2), (S4, 1, 2), (Ort, 2, 2), (KTB, 1, 2)])
    def test_enumeration_matches_count_and_is_duplicate_free(self, sig, k, d):
        corpus = formula_corpus(sig, k, d)
        assert len(corpus) == corpus_size(sig, k, d)
        assert len(set(corpus)) == len(corpus)
        assert all(depth(t) <= d for t in corpus)

    def test_enumeration_is_complete(self):
        # every term of depth <= 2 over p1 in a tiny signature appears
        corpus = set(formula_corpus(HA, 1, 2))
        leaves = [Var("p1"), BOT, TOP]
        level1 = leaves + [App(s, (a, b)) for s, _ in HA.operations for a, b in itertools.product(leaves, repeat=2)]
        for s, _ in HA.operations:
            for a, b in itertools.product(level1, repeat=2):
                assert App(s, (a, b)) in corpus

    def test_ordered_by_depth(self):
        ds = [depth(t) for t in iter_formulas(S4, 1, 2)]
        assert ds == sorted(ds)

    @given(st.sampled_from([(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 1)]), st.sampled_from([HA, S4, KTB, Ort]))
    def test_count_recurrence_small(self, kd, sig):
        k, d = kd
        assert sum(1 for _ in iter_formulas(sig, k, d)) == corpus_size(sig, k, d)

    def test_constants_are_depth_zero(self):
        assert Const("bot") in formula_corpus(HA, 1, 0)
