import json
import subprocess
import sys

import pytest

from pal.cli import main
from pal.corpus import load_algebra
from pal.lang import KTB, parse_formula


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParse:
    def test_precedence(self, capsys):
        assert run(capsys, "parse", "--sig", "HA", "p -> q | r") == (0, "p -> (q | r)\n", "")

    def test_symbol_not_in_signature(self, capsys):
        code, out, err = run(capsys, "parse", "--sig", "HA", "[]p")
        assert code == 2 and out == ""
        assert "symbol [] not in HA" in err and "position 0" in err

    def test_ortho(self, capsys):
        assert run(capsys, "parse", "--sig", "Ort", "~(p & q)")[:2] == (0, "~(p & q)\n")

    def test_equation(self, capsys):
        assert run(capsys, "parse", "--sig", "S4", "[]p = [][]p")[:2] == (0, "[]p = [][]p\n")

    def test_bad_signature_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["parse", "--sig", "K", "p"])
        assert exc.value.code == 2


class TestTranslate:
    @pytest.mark.parametrize(
        "trans, formula, expected",
        [("gmt", "p -> q", "[](~[]p | []q)"), ("kgg", "p | q", "~~(~~p | ~~q)"), ("goldblatt", "~p", "[]~[]<>p")],
    )
    def test_examples(self, capsys, trans, formula, expected):
        code, out, _ = run(capsys, "translate", "--trans", trans, formula)
        assert code == 0 and out == expected + "\n"

    def test_goldblatt_matches_parenthesised_form(self, capsys):
        _, out, _ = run(capsys, "translate", "--trans", "goldblatt", "~p")
        assert parse_formula(out, KTB) == parse_formula("[]~([]<>p)", KTB)

    def test_context_mode(self, capsys):
        assert run(capsys, "translate", "--trans", "gmt", "--mode", "context", "p -> q")[1] == "[](~p | q)\n"

    def test_spec_file(self, capsys, tmp_path):
        from pal.translate import builtin_translation

        path = tmp_path / "t.json"
        path.write_text(json.dumps(builtin_translation("kgg").to_dict()))
        assert run(capsys, "translate", "--trans", str(path), "p | q")[1] == "~~(~~p | ~~q)\n"

    def test_unknown(self, capsys):
        code, _, err = run(capsys, "translate", "--trans", "nope.json", "p")
        assert code == 2 and "error" in err


class TestCheck:
    def test_invalid_with_witness(self, capsys):
        code, out, _ = run(capsys, "check", "--algebra", "H3", "~~p -> p")
        assert code == 1 and out == "INVALID\nwitness: p=a\n"

    def test_polyatomic(self, capsys):
        code, out, _ = run(capsys, "check", "--algebra", "H3", "--mode", "polyatomic", "--selector", "~~x", "~~p -> p")
        assert code == 0 and out == "VALID\n"

    def test_sequent(self, capsys):
        assert run(capsys, "check", "--algebra", "B2", "|- p -> p")[:2] == (0, "VALID\n")
        assert run(capsys, "check", "--algebra", "H3", "p, p -> q |- q")[:2] == (0, "VALID\n")

    @pytest.mark.parametrize(
        "algebra, formula",
        [("H3", "~~p -> p"), ("fork5", "(p -> q) | (q -> p)"), ("fork5", "~p | ~~p"), ("s4_chain2", "p -> []p"), ("o6", "~p | (p & q)")],
    )
    def test_witness_reverifies(self, capsys, algebra, formula):
        code, out, _ = run(capsys, "check", "--algebra", algebra, formula)
        assert code == 1
        valuation = out.splitlines()[1].removeprefix("witness: ").replace(" ", "")
        code, out, _ = run(capsys, "check", "--algebra", algebra, "--valuation", valuation, formula)
        assert code == 1 and "FAILS" in out

    def test_valuation_that_holds(self, capsys):
        code, out, _ = run(capsys, "check", "--algebra", "H3", "--valuation", "p=1", "~~p -> p")
        assert code == 0 and "HOLDS" in out

    def test_polyatomic_needs_selector(self, capsys):
        assert run(capsys, "check", "--algebra", "H3", "--mode", "polyatomic", "p")[0] == 2

    def test_signature_error(self, capsys):
        code, _, err = run(capsys, "check", "--algebra", "H3", "[]p")
        assert code == 2 and "not in HA" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "check", "--algebra", str(tmp_path / "x.json"), "p")
        assert code == 2 and "no such algebra file" in err

    def test_valuation_limit(self, capsys, monkeypatch):
        monkeypatch.setenv("PAL_MAX_VALUATIONS", "4")
        code, _, err = run(capsys, "check", "--algebra", "H3", "p & q -> p")
        assert code == 2 and "PAL_MAX_VALUATIONS" in err


class TestFunctor:
    def test_theta_from_file(self, capsys, tmp_path):
        run(capsys, "corpus", "save", "s4_chain2", "--dir", str(tmp_path))
        out_path = tmp_path / "out.json"
        code, out, _ = run(capsys, "functor", "theta", "--trans", "gmt", "--algebra", str(tmp_path / "s4_chain2.json"), "-o", str(out_path))
        assert code == 0 and "3-element HA" in out
        a = load_algebra(out_path)
        assert a.size == 3 and a.sig.name == "HA"

    def test_envelope(self, capsys, tmp_path):
        run(capsys, "corpus", "save", "H3", "--dir", str(tmp_path))
        out_path = tmp_path / "out.json"
        code, out, _ = run(capsys, "functor", "envelope", "--algebra", str(tmp_path / "H3.json"), "-o", str(out_path))
        assert code == 0 and "4-element S4" in out
        assert load_algebra(out_path).size == 4

    def test_theta_kgg_b2_to_stdout(self, capsys):
        code, out, _ = run(capsys, "functor", "theta", "--trans", "kgg", "--algebra", "B2")
        d = json.loads(out)
        assert code == 0 and d["size"] == 2

    def test_theta_needs_translation(self, capsys):
        assert run(capsys, "functor", "theta", "--algebra", "B2")[0] == 2

    def test_envelope_of_non_heyting(self, capsys):
        assert run(capsys, "functor", "envelope", "--algebra", "K2")[0] == 2


class TestVerify:
    def test_translation_theorem(self, capsys):
        code, out, err = run(capsys, "verify", "--suite", "translation-theorem", "--family", "poset_heyting", "--bound", "4", "--depth", "3", "--vars", "2")
        d = json.loads(out)
        assert code == 0 and d["agreement"] is True
        assert d["formula_checks"] == 197608372 * 24
        assert " s" in err

    def test_unit_iso(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "unit-iso", "--bound", "4")
        assert code == 0 and json.loads(out)["agreement"]

    def test_selectivity_goldblatt(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "selectivity", "--trans", "goldblatt", "--bound", "3")
        assert code == 0 and json.loads(out)["agreement"]

    def test_unknown_suite(self, capsys):
        code, out, err = run(capsys, "verify", "--suite", "bogus")
        assert code == 2 and out == "" and "unknown suite" in err

    def test_failing_report_exit_code(self, capsys, tmp_path):
        from pal.translate import builtin_translation

        spec = dict(builtin_translation("gmt").to_dict(), selector="x")
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(spec))
        code, out, _ = run(capsys, "verify", "--suite", "translation-theorem", "--trans", str(path), "--bound", "2", "--depth", "2", "--vars", "1")
        assert code == 1 and json.loads(out)["agreement"] is False

    def test_out_file_and_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            code, out, _ = run(capsys, "verify", "--suite", "theta-fixpoint", "--out", str(path))
            assert code == 0 and out == ""
        assert a.read_bytes() == b.read_bytes()


class TestCorpus:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "corpus", "list")
        assert code == 0 and "fork5" in out and "rs_ktb" in out

    def test_list_family(self, capsys):
        code, out, _ = run(capsys, "corpus", "list", "--family", "preorder_s4", "--bound", "3")
        assert code == 0 and len(out.splitlines()) == 13

    def test_save_family(self, capsys, tmp_path):
        code, _, _ = run(capsys, "corpus", "save", "--family", "rs_ktb", "--bound", "3", "--dir", str(tmp_path))
        assert code == 0 and len(list(tmp_path.glob("*.json"))) == 7

    def test_show(self, capsys):
        code, out, _ = run(capsys, "corpus", "show", "H3")
        assert code == 0 and json.loads(out)["labels"] == ["0", "a", "1"]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pal.cli", "check", "--algebra", "H3", "~~p -> p"], capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout == "INVALID\nwitness: p=a\n"
