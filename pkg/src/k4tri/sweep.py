"""Run partition and packing checks over families of instances.

Instance sources:

* ``random``: ``seeds`` graphs per n from :func:`random_k4free`, with the
  per-instance seed ``derive_seed(seed, n, i)`` and densities cycled by i;
* ``family``: every blow-up of one atlas graph with k in ``1..kmax`` per
  component and at most ``max_vertices`` vertices, with its blow-up partition;
* ``exhaustive``: every labelled K4-free graph for each n in the range;
* ``classes``: one graph per isomorphism class of K4-free graphs.

Violations are data: they are counted and the first few per check are kept as
witnesses carrying the graph6 and partition needed to reproduce them.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product

from .atlas import BaseGraphId, BlowUpSpec, blow_up, vertex_count
from .enumeration import k4free_graphs, random_k4free
from .errors import K4TriError, PackingBudgetExceeded
from .graph import MAX_VERTICES, Graph, encode_graph6, has_clique, nonisomorphic_graphs, parse_graph6
from .packing import (
    check_conjecture_te,
    check_huang_shi,
    check_packing_theorem_bound,
    check_theorem11,
    max_edge_disjoint_triangles,
)
from .partition import (
    PARTITION_CHECKS,
    CliquePartition,
    enumerate_greedy_partitions,
    greedy_partition,
    partition_stats,
)
from .report import report_header
from .rng import derive_seed

# Checks that are theorems; "all" expands to these.  The original conjecture
# and the packing checks are opt-in.
THEOREM_CHECKS = ("main-theorem", "eq3", "lemma31", "key-lemma", "appendixA", "omega-bound")
PACKING_CHECKS = {
    "huang-shi": check_huang_shi,
    "theorem11": lambda g, p, packing: check_theorem11(g, packing),
    "conjecture-te": check_conjecture_te,
    "packing-bound": check_packing_theorem_bound,
}
ALL_CHECK_NAMES = tuple(PARTITION_CHECKS) + tuple(PACKING_CHECKS)
SOURCES = ("random", "family", "exhaustive", "classes")
EXHAUSTIVE_PARTITION_MAX_N = 10


def resolve_checks(names) -> tuple[str, ...]:
    """Expand ``"all"`` and validate names; order follows ALL_CHECK_NAMES."""
    if isinstance(names, str):
        names = [x for x in names.split(",") if x]
    wanted = set()
    for name in names:
        if name == "all":
            wanted.update(THEOREM_CHECKS)
        elif name in ALL_CHECK_NAMES:
            wanted.add(name)
        else:
            raise K4TriError(f"unknown check {name!r}; choose from {', '.join(ALL_CHECK_NAMES)} or all")
    if not wanted:
        raise K4TriError("no checks selected")
    return tuple(c for c in ALL_CHECK_NAMES if c in wanted)


@dataclass
class SweepConfig:
    source: str = "random"
    n_min: int = 5
    n_max: int = 10
    seeds: int = 100
    seed: int = 0
    densities: tuple[float, ...] = (1.0, 0.8, 0.6, 0.4)
    checks: tuple[str, ...] = THEOREM_CHECKS
    partition_mode: str = "deterministic"
    family: str | None = None
    kmax: int = 4
    max_vertices: int = 36
    jobs: int = 1
    max_witnesses: int = 20

    def __post_init__(self):
        if self.source not in SOURCES:
            raise K4TriError(f"unknown source {self.source!r}")
        if self.partition_mode not in ("deterministic", "exhaustive"):
            raise K4TriError(f"unknown partition mode {self.partition_mode!r}")
        if self.source == "family":
            if self.family is None:
                raise K4TriError("family source needs a base graph id")
            self.family = BaseGraphId(self.family).value
            if self.kmax < 1:
                raise K4TriError("kmax must be at least 1")
        else:
            if not 1 <= self.n_min <= self.n_max <= MAX_VERTICES:
                raise K4TriError(f"bad n range {self.n_min}..{self.n_max}")
            if self.partition_mode == "exhaustive" and self.n_max > EXHAUSTIVE_PARTITION_MAX_N:
                raise K4TriError(f"exhaustive partitions need n <= {EXHAUSTIVE_PARTITION_MAX_N}")
        if self.source in ("exhaustive", "classes") and self.n_max > 7:
            raise K4TriError("exhaustive and classes sources are limited to n <= 7")
        if self.jobs < 1:
            raise K4TriError("jobs must be at least 1")
        if self.seeds < 0:
            raise K4TriError("seeds must be nonnegative")
        self.checks = resolve_checks(self.checks)
        self.densities = tuple(float(d) for d in self.densities)


@dataclass
class CheckTally:
    checked: int = 0
    violations: int = 0
    skipped: int = 0


@dataclass
class SweepReport:
    header: dict
    instances: int = 0
    partitions: int = 0
    tallies: dict[str, CheckTally] = field(default_factory=dict)
    witnesses: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.violations == 0 for t in self.tallies.values())

    def violations(self, check: str) -> int:
        return self.tallies[check].violations

    def to_dict(self) -> dict:
        return {
            "header": self.header, "instances": self.instances, "partitions": self.partitions,
            "tallies": {k: asdict(v) for k, v in self.tallies.items()},
            "witnesses": self.witnesses,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def summary_lines(self) -> list[str]:
        lines = [f"instances={self.instances} partitions={self.partitions}"]
        for name, t in self.tallies.items():
            lines.append(f"{name}: checked={t.checked} violations={t.violations} skipped={t.skipped}")
        return lines


def iter_instances(cfg: SweepConfig):
    """Yield (label, graph, fixed partition or None) in a fixed order."""
    if cfg.source == "family":
        gid = BaseGraphId(cfg.family)
        for k in product(range(1, cfg.kmax + 1), repeat=3):
            spec = BlowUpSpec(gid, k)
            if vertex_count(spec) > cfg.max_vertices:
                continue
            entry = blow_up(spec)
            yield {"family": gid.value, "k": list(k)}, entry.graph, entry.partition
        return
    for n in range(cfg.n_min, cfg.n_max + 1):
        if cfg.source == "random":
            for i in range(cfg.seeds):
                s = derive_seed(cfg.seed, n, i)
                density = cfg.densities[i % len(cfg.densities)]
                yield {"n": n, "i": i, "seed": s, "density": density}, random_k4free(n, density, s), None
        elif cfg.source == "exhaustive":
            for i, g in enumerate(k4free_graphs(n)):
                yield {"n": n, "i": i}, g, None
        else:
            for i, g in enumerate(x for x in nonisomorphic_graphs(n) if not has_clique(x, 4)):
                yield {"n": n, "i": i}, g, None


def _partitions(cfg: SweepConfig, g: Graph, fixed):
    if fixed is not None:
        return [fixed]
    if cfg.partition_mode == "exhaustive":
        return enumerate_greedy_partitions(g)
    return [greedy_partition(g)]


def _run_chunk(cfg: SweepConfig, items):
    """Check a list of (label, graph6, partition lists or None)."""
    tallies = {c: CheckTally() for c in cfg.checks}
    witnesses = {c: [] for c in cfg.checks}
    partitions = 0
    need_packing = any(c in PACKING_CHECKS for c in cfg.checks)
    for label, g6, fixed in items:
        g = parse_graph6(g6)
        fixed = CliquePartition(fixed) if fixed is not None else None
        packing = None
        if need_packing:
            try:
                packing = max_edge_disjoint_triangles(g)
            except PackingBudgetExceeded:
                packing = None
        for p in _partitions(cfg, g, fixed):
            partitions += 1
            stats = partition_stats(g, p)
            for name in cfg.checks:
                tally = tallies[name]
                if name in PACKING_CHECKS:
                    if packing is None:
                        tally.skipped += 1
                        continue
                    rep = PACKING_CHECKS[name](g, p, packing=packing)
                else:
                    rep = PARTITION_CHECKS[name](g, p, stats)
                tally.checked += 1
                if not rep.holds:
                    tally.violations += 1
                    if len(witnesses[name]) < cfg.max_witnesses:
                        d = rep.to_dict()
                        d["instance"] = label
                        witnesses[name].append(d)
    return partitions, tallies, witnesses


def sweep(cfg: SweepConfig) -> SweepReport:
    """Run the configured checks; the result does not depend on ``jobs``."""
    items = [(label, encode_graph6(g), p.as_lists() if p is not None else None)
             for label, g, p in iter_instances(cfg)]
    header = report_header(command="sweep", config={k: v for k, v in asdict(cfg).items() if k != "jobs"})
    if cfg.jobs == 1 or len(items) < 2:
        parts = [_run_chunk(cfg, items)]
    else:
        size = -(-len(items) // cfg.jobs)
        chunks = [items[i:i + size] for i in range(0, len(items), size)]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            parts = list(pool.map(_run_chunk, [cfg] * len(chunks), chunks))
    report = SweepReport(header, instances=len(items), tallies={c: CheckTally() for c in cfg.checks})
    kept = {c: 0 for c in cfg.checks}
    # contiguous chunks merged in order keep the first witnesses of a serial run
    for partitions, tallies, witnesses in parts:
        report.partitions += partitions
        for name, t in tallies.items():
            agg = report.tallies[name]
            agg.checked += t.checked
            agg.violations += t.violations
            agg.skipped += t.skipped
            for w in witnesses[name]:
                if kept[name] < cfg.max_witnesses:
                    report.witnesses.append(w)
                    kept[name] += 1
    report.witnesses.sort(key=lambda w: ALL_CHECK_NAMES.index(w["check"]))
    return report
