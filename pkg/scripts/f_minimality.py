"""Probe whether a corpus of Boolean envelopes is closed under core superalgebras.

K is a single envelope B(H) (default: of the 3-element chain).  The
saturation adds every preorder S4 algebra with at most --bound points that
contains a copy of K over its open core.  The formulas checked are the
one-variable S4 corpus up to --depth together with a list of standard
axioms of S4 extensions; those that hold on K but fail on the saturation
are printed.
"""

import argparse
import sys

from pal.adjoint import boolean_envelope
from pal.companions import f_minimality_check
from pal.corpus import builtin_algebra, builtin_corpus
from pal.lang import S4, formula_corpus, parse_formula, render_formula
from pal.translate import builtin_translation

NAMED_AXIOMS = {
    "T": "[]p -> p",
    "4": "[]p -> [][]p",
    "B": "p -> []<>p",
    "5": "<>p -> []<>p",
    ".2": "<>[]p -> []<>p",
    ".1": "[]<>p -> <>[]p",
    ".3": "[]([]p -> q) | []([]q -> p)",
    "Grz": "[]([](p -> []p) -> p) -> p",
    "bd2": "<>[]p -> p",
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--heyting", default="H3", help="builtin Heyting algebra H")
    ap.add_argument("--bound", type=int, default=3)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--show", type=int, default=10, help="how many separating formulas to print")
    args = ap.parse_args(argv)
    env = boolean_envelope(builtin_algebra(args.heyting))[0]
    named = {parse_formula(v, S4): k for k, v in NAMED_AXIOMS.items()}
    formulas = list(named) + [t for t in formula_corpus(S4, 1, args.depth) if t not in named]
    rep = f_minimality_check(builtin_translation("gmt"), [env], formulas, builtin_corpus("preorder_s4", args.bound))
    sep = rep.extra["separation"]
    print(f"K = {{{env.name}}}, saturation adds {len(rep.extra['saturation_added'])}: {', '.join(rep.extra['saturation_added'])}")
    print(f"{len(formulas)} formulas, {len(sep)} valid on K but not on the saturation")
    pat_kept = sum(c.witness["pat_saturation"] for c in rep.failures)
    print(f"of those, {pat_kept} still hold on the saturation under regular valuations")
    for s in sep[: args.show]:
        tag = next((k for k, v in named.items() if render_formula(k) == s), None)
        print(f"  {s}" + (f"   ({named[tag]})" if tag is not None else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
