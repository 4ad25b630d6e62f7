"""Run the theorem checks over seeded random K4-free graphs."""

import argparse
import sys

from k4tri.sweep import SweepConfig, sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=16)
    ap.add_argument("--seeds", type=int, default=834, help="graphs per n")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", help="write the full JSON report here")
    args = ap.parse_args(argv)
    report = sweep(SweepConfig(source="random", n_min=args.n_min, n_max=args.n_max,
                               seeds=args.seeds, seed=args.seed, jobs=args.jobs))
    for line in report.summary_lines():
        print(line)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json() + "\n")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
