"""Command-line interface.

Exit codes: 0 when every check passed (or the reproduction is exact), 1 when a
mathematical check failed, 2 for usage, input and I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .atlas import BaseGraphId, BlowUpSpec, blow_up, closed_form_stats, computed_stats
from .enumeration import BASE_CASES, check_a0_cases, run_base_case, table1_matches, table1_rows
from .errors import K4TriError, PackingBudgetExceeded
from .graph import encode_graph6, has_clique, parse_graph6
from .packing import max_edge_disjoint_triangles
from .partition import PARTITION_CHECKS, enumerate_greedy_partitions, greedy_partition, partition_stats
from .report import report_header
from .sweep import EXHAUSTIVE_PARTITION_MAX_N, PACKING_CHECKS, SweepConfig, resolve_checks, sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_triple(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected three comma-separated integers, got {text!r}") from None
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated integers, got {text!r}")
    return parts


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise UsageError(f"expected a range like 5..10, got {text!r}") from None
    if lo_i > hi_i:
        raise UsageError(f"empty range {text!r}")
    return lo_i, hi_i


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- atlas --------------------------------------------------------------------


def cmd_atlas(args) -> int:
    try:
        gid = BaseGraphId(args.id)
    except ValueError:
        raise UsageError(f"unknown graph id {args.id!r}; choose from F1, F2, F3, F4") from None
    k = parse_triple(args.k) if args.k else (1, 1, 1)
    try:
        spec = BlowUpSpec(gid, k)
        entry = blow_up(spec)
    except K4TriError as exc:
        raise UsageError(str(exc)) from None
    cf = closed_form_stats(spec)
    measured = computed_stats(entry)
    s = partition_stats(entry.graph, entry.partition)
    expected = {"v": cf.v, "e": cf.e, "r": cf.r, "t": cf.t, "g": cf.g}
    agree = measured == expected and cf.g == cf.g_discrepancy
    if args.format == "json":
        doc = {"header": report_header(command="atlas"), **entry.sidecar(),
               "computed": measured, "omega": s.omega, "agree": agree}
        _emit(json.dumps(doc, sort_keys=True) + "\n", args.out)
    else:
        lines = [
            "# " + json.dumps(report_header(command="atlas")),
            f"id={gid.value} k={','.join(map(str, k))}",
            f"graph6={encode_graph6(entry.graph)}",
            f"partition={entry.partition.as_lists()}",
            f"{'':10}{'v':>6}{'e':>6}{'r':>6}{'t':>8}{'g':>6}",
            "computed  " + "".join(f"{measured[x]:>{w}}" for x, w in zip("vert", (6, 6, 6, 8))) + f"{measured['g']:>6}",
            "closed    " + "".join(f"{expected[x]:>{w}}" for x, w in zip("vert", (6, 6, 6, 8))) + f"{expected['g']:>6}",
            f"omega={s.omega} g = r(e - r(n-r)) - t",
            "agree" if agree else "DISAGREE",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if agree else EXIT_FAIL


# -- table1 -------------------------------------------------------------------


def _table1_csv(rows, header) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(header) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "c", "constant", "class_count", "graph6_list", "t", "M2", "e"])
    for r in rows:
        w.writerow([r["a"], r["b"], r["c"], r["constant"], r["class_count"],
                    ";".join(r["graph6"]), ";".join(map(str, r["t"])),
                    ";".join(map(str, r["m2"])), ";".join(map(str, r["e"]))])
    return buf.getvalue()


def cmd_table1(args) -> int:
    cases = [parse_triple(args.case)] if args.case else BASE_CASES
    for case in cases:
        if case not in BASE_CASES:
            raise UsageError(f"case must be one of {BASE_CASES}, got {case}")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    results = [run_base_case(c, include_empty_subsets=args.include_empty_subsets,
                             strategy=args.strategy, jobs=args.jobs) for c in cases]
    rows = table1_rows(results)
    diffs = table1_matches(results)
    extra_viol = {
        f"{r.spec.as_tuple()}:{name}": count
        for r in results for name, count in r.violations.items() if name != "ineq8" and count
    }
    a0 = check_a0_cases() if not args.case else None
    ok = not diffs and not extra_viol and (a0 is None or a0.holds)
    header = report_header(command="table1", include_empty_subsets=args.include_empty_subsets,
                           strategy=args.strategy, cases=[list(c) for c in cases])
    if args.format == "csv":
        text = _table1_csv(rows, header)
    elif args.format == "json":
        doc = {"header": header, "rows": rows, "matches": not diffs, "diffs": diffs,
               "other_violations": extra_viol,
               "visited": {str(r.spec.as_tuple()): r.visited for r in results},
               "a0": a0.to_dict() if a0 else None}
        text = json.dumps(doc, sort_keys=True) + "\n"
    else:
        lines = ["# " + json.dumps(header)]
        for r, res in zip(rows, results):
            classes = ", ".join(f"{m or '?'}: {{{t}, {m2}, {e}}}"
                                for m, t, m2, e in zip(r["classes"], r["t"], r["m2"], r["e"]))
            lines.append(f"({r['a']},{r['b']},{r['c']})  t >= M2 + e - {r['constant']}  "
                         f"visited={res.visited}  {classes or 'none'}")
        if a0 is not None:
            lines.append(f"a = 0 cases: {a0.witness['graphs']} graphs, "
                         f"max e - 3n + 9 = {a0.witness['max_e_minus_3n_plus_9']}, "
                         f"{'holds' if a0.holds else 'FAILS'}")
        lines += [f"DIFF {d}" for d in diffs]
        lines += [f"VIOLATION {k} x{v}" for k, v in extra_viol.items()]
        lines.append("matches" if ok else "MISMATCH")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if not ok and args.format == "csv":
        for d in diffs:
            print(f"DIFF {d}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# -- verify -------------------------------------------------------------------


def _open_input(path: str | None):
    if path in (None, "-"):
        return sys.stdin
    try:
        return open(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def cmd_verify(args) -> int:
    try:
        checks = resolve_checks(args.checks)
    except K4TriError as exc:
        raise UsageError(str(exc)) from None
    stream = _open_input(args.input)
    out = open(args.out, "w") if args.out else sys.stdout
    failed = bad_input = False
    try:
        out.write(json.dumps({"header": report_header(command="verify", checks=list(checks),
                                                      partition_mode=args.partition_mode)}) + "\n")
        for lineno, line in enumerate(stream, 1):
            if not line.strip():
                continue
            try:
                g = parse_graph6(line)
                if has_clique(g, 4):
                    raise K4TriError("graph contains K4")
                if args.partition_mode == "exhaustive":
                    if g.n > EXHAUSTIVE_PARTITION_MAX_N:
                        raise K4TriError(f"exhaustive partitions need n <= {EXHAUSTIVE_PARTITION_MAX_N}")
                    parts = enumerate_greedy_partitions(g)
                else:
                    parts = [greedy_partition(g)]
            except K4TriError as exc:
                bad_input = True
                out.write(json.dumps({"line": lineno, "error": str(exc)}) + "\n")
                continue
            packing = None
            if any(c in PACKING_CHECKS for c in checks):
                try:
                    packing = max_edge_disjoint_triangles(g)
                except PackingBudgetExceeded as exc:
                    out.write(json.dumps({"line": lineno, "skipped": "packing", "reason": str(exc)}) + "\n")
            for p in parts:
                stats = partition_stats(g, p)
                for name in checks:
                    if name in PACKING_CHECKS:
                        if packing is None:
                            continue
                        rep = PACKING_CHECKS[name](g, p, packing=packing)
                    else:
                        rep = PARTITION_CHECKS[name](g, p, stats)
                    failed |= not rep.holds
                    out.write(json.dumps({"line": lineno, **rep.to_dict()}, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
        if stream is not sys.stdin:
            stream.close()
    if failed:
        return EXIT_FAIL
    return EXIT_USAGE if bad_input else EXIT_OK


# -- sweep --------------------------------------------------------------------


def cmd_sweep(args) -> int:
    n_lo, n_hi = parse_range(args.n)
    source = "family" if args.family else args.source
    try:
        densities = tuple(float(x) for x in args.densities.split(","))
        cfg = SweepConfig(
            source=source, n_min=n_lo, n_max=n_hi, seeds=args.seeds, seed=args.seed,
            densities=densities, checks=args.checks, partition_mode=args.partition_mode,
            family=args.family, kmax=args.kmax, max_vertices=args.max_vertices, jobs=args.jobs,
        )
    except (K4TriError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    report = sweep(cfg)
    for line in report.summary_lines():
        print(line)
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n")
    if report.witnesses:
        wdir = Path(args.witness_dir)
        wdir.mkdir(parents=True, exist_ok=True)
        counts = {}
        for w in report.witnesses:
            i = counts[w["check"]] = counts.get(w["check"], 0) + 1
            (wdir / f"{w['check']}-{i:03d}.json").write_text(
                json.dumps({"header": report.header, **w}, sort_keys=True) + "\n")
        print(f"witnesses written to {wdir}")
    return EXIT_OK if report.ok else EXIT_FAIL


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k4tri", description="Triangles in K4-free graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("atlas", help="build F1-F4 or a blow-up and compare with the closed forms")
    p.add_argument("id", help="F1, F2, F3 or F4")
    p.add_argument("--k", help="blow-up vector a,b,c (default 1,1,1)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("table1", help="run the r = 3 base-case enumeration")
    p.add_argument("--include-empty-subsets", action="store_true",
                   help="also visit graphs with no edges between an iterated pair of cliques")
    p.add_argument("--case", help="a single case a,b,c")
    p.add_argument("--strategy", choices=("classes", "naive"), default="classes")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="check graphs read as graph6 lines")
    p.add_argument("input", nargs="?", help="graph6 file, or - for standard input (default)")
    p.add_argument("--checks", "--check", default="all",
                   help="comma-separated list or 'all' (the theorem checks)")
    p.add_argument("--partition-mode", choices=("deterministic", "exhaustive"), default="deterministic")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run checks over random graphs, small graphs or a blow-up family")
    p.add_argument("--n", default="5..10", help="vertex range lo..hi")
    p.add_argument("--seeds", type=int, default=100, help="random graphs per n")
    p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    p.add_argument("--source", choices=("random", "exhaustive", "classes"), default="random")
    p.add_argument("--densities", default="1.0,0.8,0.6,0.4")
    p.add_argument("--checks", default="all")
    p.add_argument("--partition-mode", choices=("deterministic", "exhaustive"), default="deterministic")
    p.add_argument("--family", choices=[g.value for g in BaseGraphId])
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--max-vertices", type=int, default=36)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--witness-dir", default="sweep-witnesses")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"k4tri {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"k4tri {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
