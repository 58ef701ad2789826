"""Command-line front end: ``pal parse|translate|check|functor|verify|corpus``.

Exit codes: 0 success, 1 a check failed (INVALID or a failing report),
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .adjoint import boolean_envelope, theta_image
from .algebra import AlgebraError, FiniteAlgebra, algebra_to_dict, evaluate
from .corpus import BUILTIN_NAMES, FAMILIES, FrameError, builtin_corpus, resolve_algebra, save_algebra
from .lang import (
    FormulaSyntaxError,
    SignatureError,
    SIGNATURES,
    parse_equation,
    parse_formula,
    render_equation,
    render_formula,
)
from .polyatomic import Sequent, parse_sequent, regular_elements, sequent_witness
from .suites import SUITES, SuiteError, SuiteOptions, run_suite
from .translate import MODES, TranslationError, apply_translation, resolve_translation

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- parse / translate -------------------------------------------------------------


def cmd_parse(args) -> int:
    if "=" in args.formula:
        print(render_equation(parse_equation(args.formula, args.sig)))
    else:
        print(render_formula(parse_formula(args.formula, args.sig)))
    return EXIT_OK


def cmd_translate(args) -> int:
    tr = resolve_translation(args.trans)
    if args.mode:
        tr = tr.with_mode(args.mode)
    print(render_formula(apply_translation(tr, parse_formula(args.formula, tr.source))))
    return EXIT_OK


# --- check -------------------------------------------------------------------------


def _parse_valuation(text: str, a: FiniteAlgebra) -> dict[str, int]:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise UsageError(f"bad valuation entry {part!r}; expected name=element")
        name, label = (x.strip() for x in part.split("=", 1))
        try:
            out[name] = a.index(label)
        except (KeyError, ValueError):
            raise UsageError(f"{a.name} has no element {label!r}") from None
    return out


def _format_valuation(a: FiniteAlgebra, v: dict[str, int]) -> str:
    return ", ".join(f"{k}={a.label(x)}" for k, x in v.items())


def cmd_check(args) -> int:
    a = resolve_algebra(args.algebra)
    seq = parse_sequent(args.sequent, a.sig)
    domain = None
    if args.mode == "polyatomic":
        if not args.selector:
            raise UsageError("--mode polyatomic needs --selector")
        domain = regular_elements(a, parse_formula(args.selector, a.sig))
    elif args.selector:
        raise UsageError("--selector only applies with --mode polyatomic")
    if args.valuation is not None:
        return _check_at(a, seq, _parse_valuation(args.valuation, a), domain)
    w = sequent_witness(a, seq, domain)
    if w is None:
        print("VALID")
        return EXIT_OK
    print("INVALID")
    print(f"witness: {_format_valuation(a, w)}")
    return EXIT_FAIL


def _check_at(a: FiniteAlgebra, seq: Sequent, v: dict[str, int], domain) -> int:
    """Evaluate the sequent at one valuation; exit 1 iff it fails there."""
    missing = [n for n in seq.variables() if n not in v]
    if missing:
        raise UsageError(f"valuation misses {', '.join(missing)}")
    if domain is not None:
        outside = [n for n in seq.variables() if v[n] not in domain]
        if outside:
            raise UsageError(f"{', '.join(outside)} not regular in {a.name}")
    top = a.top_index
    prem = [evaluate(a, t, v) for t in seq.premises]
    concl = evaluate(a, seq.conclusion, v)
    for t, x in zip(seq.premises, prem):
        print(f"premise {render_formula(t)} = {a.label(x)}")
    print(f"conclusion {render_formula(seq.conclusion)} = {a.label(concl)}")
    if all(x == top for x in prem) and concl != top:
        print("FAILS at the valuation")
        return EXIT_FAIL
    print("HOLDS at the valuation")
    return EXIT_OK


# --- functors ----------------------------------------------------------------------


def cmd_functor(args) -> int:
    a = resolve_algebra(args.algebra)
    if args.functor == "theta":
        if not args.trans:
            raise UsageError("theta needs --trans")
        result = theta_image(resolve_translation(args.trans), a)
    else:
        result = boolean_envelope(a)[0]
    if args.output:
        save_algebra(result, args.output)
        print(f"wrote {result.name}: {result.size}-element {result.sig.name} algebra to {args.output}")
    else:
        sys.stdout.write(json.dumps(algebra_to_dict(result), indent=1) + "\n")
    return EXIT_OK


# --- verify ------------------------------------------------------------------------


def cmd_verify(args) -> int:
    opts = SuiteOptions(
        trans=resolve_translation(args.trans) if args.trans else None,
        family=args.family,
        bound=args.bound,
        depth=args.depth,
        num_vars=args.vars,
    )
    start = time.perf_counter()
    report = run_suite(args.suite, opts)
    elapsed = time.perf_counter() - start
    _emit(report.to_json(), args.out)
    # timing stays out of the report so identical flags give identical bytes
    print(f"{args.suite}: {len(report.checks)} checks, {len(report.failures)} failing, {elapsed:.2f} s", file=sys.stderr)
    return EXIT_OK if report.agreement else EXIT_FAIL


# --- corpus ------------------------------------------------------------------------


def cmd_corpus(args) -> int:
    if args.action == "list":
        if args.family:
            for a in builtin_corpus(args.family, args.bound or 3):
                print(f"{a.name}\t{a.sig.name}\t{a.size}")
        else:
            print("builtin algebras: " + ", ".join(BUILTIN_NAMES))
            print("families: " + ", ".join(FAMILIES))
        return EXIT_OK
    if args.action == "show":
        if not args.name:
            raise UsageError("show needs an algebra name or path")
        sys.stdout.write(json.dumps(algebra_to_dict(resolve_algebra(args.name)), indent=1) + "\n")
        return EXIT_OK
    # save
    if not args.dir:
        raise UsageError("save needs --dir")
    target = Path(args.dir)
    target.mkdir(parents=True, exist_ok=True)
    algebras = builtin_corpus(args.family, args.bound or 3) if args.family else [resolve_algebra(args.name)] if args.name else None
    if algebras is None:
        raise UsageError("save needs --family or an algebra name")
    for a in algebras:
        save_algebra(a, target / f"{_file_stem(a.name)}.json")
    print(f"wrote {len(algebras)} algebras to {target}")
    return EXIT_OK


def _file_stem(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


# --- wiring ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pal", description="Finite-algebra checks for selective translations between propositional logics.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="parse and print a formula in canonical form")
    sp.add_argument("--sig", default="HA", choices=sorted(SIGNATURES))
    sp.add_argument("formula")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("translate", help="apply a translation to a formula")
    sp.add_argument("--trans", required=True, help="builtin name (kgg, gmt, goldblatt) or spec file")
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("formula")
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("check", help="check a formula or sequent 'A, B |- C' on an algebra")
    sp.add_argument("--algebra", required=True, help="builtin name or algebra file")
    sp.add_argument("--mode", choices=("full", "polyatomic"), default="full")
    sp.add_argument("--selector", help="unary term in x, e.g. '~~x' (polyatomic mode)")
    sp.add_argument("--valuation", help="evaluate at one valuation, e.g. 'p=a,q=1'")
    sp.add_argument("sequent")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("functor", help="regular-element algebra or Boolean envelope of an algebra")
    sp.add_argument("functor", choices=("theta", "envelope"))
    sp.add_argument("--trans")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_functor)

    sp = sub.add_parser("verify", help="run a named verification suite and print its JSON report")
    sp.add_argument("--suite", required=True, help=", ".join(SUITES))
    sp.add_argument("--trans")
    sp.add_argument("--family", choices=FAMILIES)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--vars", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("corpus", help="list, show or save builtin algebras and corpora")
    sp.add_argument("action", choices=("list", "show", "save"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--family", choices=FAMILIES)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--dir")
    sp.set_defaults(func=cmd_corpus)
    return p


INPUT_ERRORS = (UsageError, FormulaSyntaxError, SignatureError, AlgebraError, TranslationError, FrameError, SuiteError, KeyError, OSError, json.JSONDecodeError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
