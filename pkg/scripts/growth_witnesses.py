"""List blow-ups with r(e - r(n - r)) - t >= lambda, smallest first."""

import argparse
import sys

from k4tri.atlas import BaseGraphId, blow_up, closed_form_stats, counterexample_stream, vertex_count
from k4tri.partition import partition_stats


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=int, nargs="+", default=[1, 8, 27, 64])
    ap.add_argument("--family", choices=[g.value for g in BaseGraphId], default="F1")
    ap.add_argument("--limit", type=int, default=3, help="witnesses per lambda")
    ap.add_argument("--check", action="store_true", help="also rebuild each graph and recount")
    args = ap.parse_args(argv)
    ok = True
    for lam in args.lam:
        for spec in counterexample_stream(args.family, lam, limit=args.limit):
            cf = closed_form_stats(spec)
            line = f"lambda={lam:>3} {spec.base.value}{spec.k} n={vertex_count(spec):>3} e={cf.e} t={cf.t} g={cf.g}"
            if args.check:
                e = blow_up(spec)
                s = partition_stats(e.graph, e.partition)
                good = s.g == cf.g >= lam
                ok &= good
                line += f" recount g={s.g} {'ok' if good else 'MISMATCH'}"
            print(line)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
