"""Compare the two readings of the order in the Boolean envelope.

For every Heyting algebra of the poset corpus, build the envelope with the
interior taken over down-sets and over up-sets, and count the pairs (c, d)
where [](~e(c) | e(d)) differs from e(c -> d).
"""

import argparse
import sys

from pal.adjoint import boolean_envelope, envelope_implication_failures
from pal.corpus import builtin_corpus


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=4, help="largest poset size")
    args = ap.parse_args(argv)
    corpus = builtin_corpus("poset_heyting", args.bound)
    totals = {"down": 0, "up": 0}
    broken = {"down": 0, "up": 0}
    print(f"{'algebra':<24}{'size':>5}{'pairs':>7}{'down':>6}{'up':>6}")
    for h in corpus:
        row = {}
        for orient in totals:
            env, emb = boolean_envelope(h, orient, check=False)
            row[orient] = len(envelope_implication_failures(h, env, emb.map))
            totals[orient] += row[orient]
            broken[orient] += row[orient] > 0
        print(f"{h.name:<24}{h.size:>5}{h.size ** 2:>7}{row['down']:>6}{row['up']:>6}")
    for orient in totals:
        print(f"{orient}: {broken[orient]}/{len(corpus)} algebras fail, {totals[orient]} failing pairs")
    return 0 if totals["down"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
