"""Run the acceptance criteria and print one PASS/FAIL line each.

    python scripts/run_acceptance.py            # all criteria
    python scripts/run_acceptance.py 5 6 --seed 3 --jobs 4
"""
import argparse
import json
import sys

from nakajima.suites import CRITERIA, run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("ids", nargs="*", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--json", default=None, help="write the full outcomes here")
    args = ap.parse_args()
    ids = args.ids or sorted(CRITERIA)
    outcomes = run(ids, args.seed, args.jobs)
    for o in outcomes:
        print(o.line())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([o.to_json() for o in outcomes], fh, indent=1, default=str)
    return 0 if all(o.passed for o in outcomes) else 1


if __name__ == "__main__":
    sys.exit(main())
