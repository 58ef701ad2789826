"""Translation agreement one level past the acceptance depth.

Runs the translation-theorem suite for every builtin translation at the
given depth (default 4) and prints the number of formula checks and the
verdict.  Depth 5 exceeds exact 64-bit counting and is refused.
"""

import argparse
import sys
import time

from pal.suites import default_corpus, translation_theorem_suite
from pal.translate import BUILTIN_TRANSLATIONS, builtin_translation


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--vars", type=int, default=2)
    args = ap.parse_args(argv)
    ok = True
    print(f"{'translation':<12}{'algebras':>10}{'formula checks':>28}{'agree':>7}{'seconds':>9}")
    for name in BUILTIN_TRANSLATIONS:
        tr = builtin_translation(name)
        corpus = default_corpus(tr)
        start = time.perf_counter()
        rep = translation_theorem_suite(tr, corpus, args.vars, args.depth)
        secs = time.perf_counter() - start
        ok &= rep.agreement
        print(f"{name:<12}{len(corpus):>10}{rep.extra['formula_checks']:>28,}{str(rep.agreement):>7}{secs:>9.2f}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
