"""Run the ten acceptance criteria and print one line per criterion."""

import argparse
import json
import sys

from pal.acceptance import CRITERIA, run_criterion


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("numbers", nargs="*", type=int, help="criteria to run (default: all)")
    ap.add_argument("--json", metavar="PATH", help="also write every report to PATH")
    args = ap.parse_args(argv)
    chosen = [c for c in CRITERIA if not args.numbers or c.number in args.numbers]
    outcomes = []
    for c in chosen:
        o = run_criterion(c)
        outcomes.append(o)
        print(o.line(), flush=True)
    failed = [o.criterion.number for o in outcomes if not o.passed]
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} criteria pass" + (f"; failing: {failed}" if failed else ""))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({str(o.criterion.number): o.report.to_dict() for o in outcomes}, fh, indent=2, sort_keys=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
