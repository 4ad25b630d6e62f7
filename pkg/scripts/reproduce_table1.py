"""Rerun the r = 3 base-case search in both coverage modes and print the table."""

import argparse
import sys
import time

from k4tri.enumeration import BASE_CASES, run_base_case, table1_matches, table1_rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)
    ok = True
    for mode in (False, True):
        t0 = time.time()
        results = [run_base_case(c, include_empty_subsets=mode, jobs=args.jobs) for c in BASE_CASES]
        print(f"include_empty_subsets={mode} ({time.time() - t0:.1f}s)")
        for row, res in zip(table1_rows(results), results):
            classes = ", ".join(f"{m} (t={t}, M2={m2}, e={e})"
                                for m, t, m2, e in zip(row["classes"], row["t"], row["m2"], row["e"]))
            print(f"  ({row['a']},{row['b']},{row['c']}) const={row['constant']:>2} "
                  f"visited={res.visited:>7} classes={row['class_count']} {classes}")
        diffs = table1_matches(results)
        for d in diffs:
            print("  MISMATCH", d)
        ok &= not diffs
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
