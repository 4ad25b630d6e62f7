"""Exhaustive r = 3 base-case search and random K4-free instances.

The base-case search fixes three cliques ``T1, T2, T3`` (sizes given by the
case ``(a, b, c)``) and runs over cross-edge sets between them.  One pair of
cliques (the seeded pair) is taken from a list of representatives up to
relabelling inside each clique; the second pair is an explicit loop and the
third pair is evaluated for all of its subsets at once with numpy.  For each
graph that is a valid greedy partition we record the statistics needed by the
r = 3 inequality ``t >= F0 + M2 - M0`` and by every partition identity.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb

import numpy as np

from .atlas import match_bad_graph
from .errors import K4TriError
from .graph import Graph, canonical_form, encode_graph6, has_clique
from .partition import (
    BAD_SIGNATURES,
    CliquePartition,
    f0_closed_form,
    half_term,
    m0_closed_form,
    partition_stats,
)
from .report import VerificationReport
from .rng import XorShift64Star

# Inequality constants as printed per case; each must equal 3(n - 3).
TABLE1_CONSTANTS = {
    (3, 0, 0): 18,
    (2, 1, 0): 15,
    (2, 0, 1): 12,
    (1, 2, 0): 12,
    (1, 1, 1): 9,
    (1, 0, 2): 6,
}

# Expected violators of the r = 3 inequality: id -> (t, M2, e).
TABLE1_EXPECTED = {
    (3, 0, 0): {"F1": (11, 8, 22), "F2": (14, 10, 23), "F3": (13, 10, 22)},
    (2, 1, 0): {"F4": (10, 8, 18)},
    (2, 0, 1): {},
    (1, 2, 0): {},
    (1, 1, 1): {},
    (1, 0, 2): {},
}

BASE_CASES = list(TABLE1_CONSTANTS)

# Seed-class counts of the hand-written lists: triangle-triangle,
# edge-edge, edge-vertex, vertex-vertex.
SEED_CLASS_COUNTS = {(3, 3): 12, (2, 2): 3, (2, 1): 2, (1, 1): 1}

BASE_CASE_CHECKS = ("ineq8", "main-theorem", "eq3", "appendixA", "lemma31", "key-lemma", "omega01")


@dataclass(frozen=True)
class BaseCaseSpec:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0 or self.a + self.b + self.c != 3:
            raise K4TriError(f"base case needs a + b + c = 3, got {(self.a, self.b, self.c)}")

    @property
    def sizes(self) -> list[int]:
        return [3] * self.a + [2] * self.b + [1] * self.c

    @property
    def n(self) -> int:
        return 3 * self.a + 2 * self.b + self.c

    @property
    def constant(self) -> int:
        return 3 * (self.n - 3)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def _check_constants() -> None:
    for case, const in TABLE1_CONSTANTS.items():
        spec = BaseCaseSpec(*case)
        if spec.constant != const:
            raise AssertionError(f"constant for {case} is {spec.constant}, table says {const}")
        # r = 3 closed forms: F0 = 3e - 9(n-3), M0 = 2e - 6(n-3), so
        # F0 + M2 - M0 = M2 + e - 3(n-3) for every e
        for e in (0, 7, 30):
            f0 = f0_closed_form(spec.n, e, 3, spec.a)
            m0 = m0_closed_form(spec.n, e, 3, spec.a)
            if f0 - m0 != e - const:
                raise AssertionError("r = 3 specialisation does not reduce to the table constant")


_check_constants()


@dataclass
class CounterexampleRecord:
    case: tuple[int, int, int]
    graph6: str
    canonical: str
    t: int
    m2: int
    e: int
    partition: list[list[int]]
    matched: str | None

    def params(self) -> tuple[int, int, int]:
        return (self.t, self.m2, self.e)

    def to_dict(self) -> dict:
        return {
            "case": list(self.case), "graph6": self.graph6, "canonical": self.canonical,
            "t": self.t, "m2": self.m2, "e": self.e, "partition": self.partition,
            "matched": self.matched,
        }


@dataclass
class BaseCaseResult:
    spec: BaseCaseSpec
    strategy: str
    include_empty_subsets: bool
    records: list[CounterexampleRecord]
    visited: int = 0
    violations: dict[str, int] = field(default_factory=dict)
    witnesses: list[VerificationReport] = field(default_factory=list)
    omega_values: set[int] = field(default_factory=set)
    seed_count: int = 0

    def canonical_set(self) -> set[str]:
        return {r.canonical for r in self.records}

    def class_summary(self) -> dict[str | None, tuple[int, int, int]]:
        return {r.matched: r.params() for r in self.records}


# -- layout of one base case ----------------------------------------------


class _Layout:
    """Vertex numbering, cross-edge slots and forbidden cliques of one case."""

    def __init__(self, spec: BaseCaseSpec):
        self.spec = spec
        sizes = spec.sizes
        self.sizes = sizes
        self.n = spec.n
        starts = [0, sizes[0], sizes[0] + sizes[1]]
        self.parts = [list(range(starts[i], starts[i] + sizes[i])) for i in range(3)]
        self.part_of = [i for i in range(3) for _ in self.parts[i]]
        if spec.a >= 2:
            order = [(0, 1), (0, 2), (1, 2)]
        else:
            order = [(1, 2), (0, 1), (0, 2)]
        # slot 0 = seeded pair, 1 = explicit loop, 2 = vectorised
        self.slots = order
        self.slot_edges = [[(u, v) for u in self.parts[i] for v in self.parts[j]] for i, j in order]
        self.slot_index = {}
        for s, edges in enumerate(self.slot_edges):
            for bit, (u, v) in enumerate(edges):
                self.slot_index[(u, v)] = (s, bit)
                self.slot_index[(v, u)] = (s, bit)
        self.internal_rows = [0] * self.n
        for part in self.parts:
            for u, v in combinations(part, 2):
                self.internal_rows[u] |= 1 << v
                self.internal_rows[v] |= 1 << u
        self.forbidden = self._forbidden_masks()

    def _forbidden_masks(self) -> list[tuple[int, int, int]]:
        """Vertex sets that must not be cliques, as required cross-edge masks.

        Greedy condition for three parts: for each ell, the union of parts of
        size <= ell is K_{ell+1}-free (ell = 3 is K4-freeness).
        """
        out = set()
        for ell in (1, 2, 3):
            union = [v for part in self.parts if len(part) <= ell for v in part]
            for subset in combinations(union, ell + 1):
                req = [0, 0, 0]
                for u, v in combinations(subset, 2):
                    if self.part_of[u] != self.part_of[v]:
                        s, bit = self.slot_index[(u, v)]
                        req[s] |= 1 << bit
                out.add(tuple(req))
        return sorted(out)

    def slot_triangles(self, slot: int, mask: int) -> int:
        """Triangles spanning exactly the two parts of ``slot``."""
        i, j = self.slots[slot]
        edges = self.slot_edges[slot]
        nb = {}
        for bit, (u, v) in enumerate(edges):
            if mask >> bit & 1:
                nb.setdefault(u, set()).add(v)
                nb.setdefault(v, set()).add(u)
        count = 0
        for x, y in ((i, j), (j, i)):
            for w in self.parts[x]:
                for u, v in combinations(self.parts[y], 2):
                    if u in nb.get(w, ()) and v in nb.get(w, ()):
                        count += 1
        return count

    def graph(self, masks: tuple[int, int, int]) -> Graph:
        rows = list(self.internal_rows)
        for s, m in enumerate(masks):
            for bit, (u, v) in enumerate(self.slot_edges[s]):
                if m >> bit & 1:
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def partition(self) -> CliquePartition:
        return CliquePartition(self.parts)

    def seed_masks(self, strategy: str) -> list[int]:
        """Valid cross-edge sets of the seeded pair.

        ``"classes"`` keeps one representative per orbit under relabelling
        inside each of the two cliques (and swapping them when they have the
        same size); ``"naive"`` keeps every valid set.
        """
        nbits = len(self.slot_edges[0])
        pair_only = [m[0] for m in self.forbidden if m[1] == 0 and m[2] == 0]
        valid = [x for x in range(1 << nbits) if not any(x & f == f for f in pair_only)]
        if strategy == "naive":
            return valid
        if strategy != "classes":
            raise K4TriError(f"unknown strategy {strategy!r}")
        i, j = self.slots[0]
        pi_, pj_ = self.parts[i], self.parts[j]
        edges = self.slot_edges[0]
        maps = []
        for a in permutations(pi_):
            ma = dict(zip(pi_, a))
            for b in permutations(pj_):
                mb = dict(zip(pj_, b))
                maps.append(lambda u, v, ma=ma, mb=mb: (ma[u], mb[v]))
                if len(pi_) == len(pj_):
                    # swap the roles of the two cliques
                    sw = dict(zip(pj_, pi_))
                    sw_back = dict(zip(pi_, pj_))
                    maps.append(lambda u, v, ma=ma, mb=mb, sw=sw, sw_back=sw_back: (sw[mb[v]], sw_back[ma[u]]))
        bit_of = {e: b for b, e in enumerate(edges)}
        reps = set()
        for x in valid:
            keys = []
            for f in maps:
                y = 0
                for bit, (u, v) in enumerate(edges):
                    if x >> bit & 1:
                        y |= 1 << bit_of[f(u, v)]
                keys.append(y)
            reps.add(min(keys))
        return sorted(reps)


class _Scorer:
    """Vectorised statistics for all graphs sharing the first two slot masks."""

    def __init__(self, layout: _Layout, include_empty: bool):
        self.layout = layout
        self.include_empty = include_empty
        spec = layout.spec
        sizes = layout.sizes
        self.n, self.r, self.a = spec.n, 3, spec.a
        e_int = [comb(s, 2) for s in sizes]
        tri_int = [1 if s == 3 else 0 for s in sizes]
        self.e_internal = sum(e_int)
        self.slot_e_int = [e_int[i] + e_int[j] for i, j in layout.slots]
        self.slot_t_int = [tri_int[i] + tri_int[j] for i, j in layout.slots]
        self.slot_floor = [2 * (sizes[i] + sizes[j] - 2) for i, j in layout.slots]
        self.ctriple = 3 * (sum(sizes) - 3)

        nbits = len(layout.slot_edges[2])
        self.vals = np.arange(1 << nbits, dtype=np.int64)
        self.bits = (self.vals[:, None] >> np.arange(nbits)) & 1
        self.pop = self.bits.sum(axis=1)
        self.tri = np.array([layout.slot_triangles(2, m) for m in range(1 << nbits)], dtype=np.int64)
        self.n1 = len(layout.slot_edges[1])
        self.tri1 = [layout.slot_triangles(1, m) for m in range(1 << self.n1)]
        self.sup = {}
        for m in layout.forbidden:
            if m[2] and m[2] not in self.sup:
                self.sup[m[2]] = (self.vals & m[2]) == m[2]
        p2, q2 = layout.slots[2]
        self.wmask = sum(1 << v for v in layout.parts[3 - p2 - q2])

    def block(self, s0: int, s1: int) -> dict | None:
        """Statistics of every valid graph with slot masks ``(s0, s1, *)``.

        Returns None when no completion is a valid greedy partition.
        """
        lay = self.layout
        if not self.include_empty and s1 == 0:
            return None
        active = [m for m in lay.forbidden if m[0] & s0 == m[0] and m[1] & s1 == m[1]]
        if any(m[2] == 0 for m in active):
            return None
        ok = np.ones(len(self.vals), dtype=bool) if self.include_empty else self.vals != 0
        for m in active:
            ok &= ~self.sup[m[2]]
        idx = np.nonzero(ok)[0]
        if not len(idx):
            return None
        fixed = lay.graph((s0, s1, 0)).adj
        # common neighbours in the third part, through the fixed slots
        mult = np.array([(fixed[u] & fixed[v] & self.wmask).bit_count() for u, v in lay.slot_edges[2]],
                        dtype=np.int64)
        n, r, a = self.n, self.r, self.a
        e0, t0 = s0.bit_count(), lay.slot_triangles(0, s0)
        e1, t1 = s1.bit_count(), self.tri1[s1]
        cross2, t2 = self.pop[idx], self.tri[idx]
        m3 = self.bits[idx] @ mult
        e = self.e_internal + e0 + e1 + cross2
        m2 = t0 + t1 + t2
        t = a + m2 + m3
        e_pairs = [self.slot_e_int[0] + e0 + 0 * idx, self.slot_e_int[1] + e1 + 0 * idx, self.slot_e_int[2] + cross2]
        t_pairs = [self.slot_t_int[0] + t0 + 0 * idx, self.slot_t_int[1] + t1 + 0 * idx, self.slot_t_int[2] + t2]
        m0 = sum(2 * (ep - fl) for ep, fl in zip(e_pairs, self.slot_floor)) - a * (r - 1)
        f0 = 3 * (e - self.ctriple)

        omega = np.zeros(len(idx), dtype=np.int64)
        hit = np.zeros(len(idx), dtype=bool)
        for sn, se, st in BAD_SIGNATURES:
            if sn == n:
                hit |= (e == se) & (t == st)
        for pos in np.nonzero(hit)[0]:
            if match_bad_graph(lay.graph((s0, s1, int(self.vals[idx[pos]])))) is not None:
                omega[pos] = 1
        return {
            "s2": self.vals[idx], "e": e, "t": t, "m1": np.full(len(idx), a), "m2": m2, "m3": m3,
            "m0": m0, "f0": f0, "omega": omega, "t123": t, "e_pairs": e_pairs, "t_pairs": t_pairs,
        }

    def checks(self, b: dict) -> dict[str, np.ndarray]:
        n, r, a = self.n, self.r, self.a
        e, t, m2, m0, f0, omega, t123 = (b[k] for k in ("e", "t", "m2", "m0", "f0", "omega", "t123"))
        half = half_term(a, r)
        bound = r * (e - r * (n - r))
        pairs_ok = np.ones(len(e), dtype=bool)
        for ep, tp, fl in zip(b["e_pairs"], b["t_pairs"], self.slot_floor):
            pairs_ok &= tp >= 2 * (ep - fl)
        return {
            "ineq8": t >= f0 + m2 - m0,
            "main-theorem": t >= bound - omega,
            "eq3": t == t123 - (r - 3) * m2 - half + a,
            "appendixA": (f0 - (r - 3) * m0 - half + a == bound)
            & (m0 == m0_closed_form(n, e, r, a))
            & (f0 == f0_closed_form(n, e, r, a)),
            "lemma31": (m2 >= m0) & pairs_ok,
            "key-lemma": t123 >= f0 + (r - 2) * (m2 - m0) - omega,
            "omega01": omega <= 1,
        }


def _run_seeds(spec_tuple, seeds, include_empty: bool, max_witnesses: int = 20):
    """Search every graph generated from the given seed masks.

    Returns (visited, violation counts, witnesses, violators, omega values).
    """
    spec = BaseCaseSpec(*spec_tuple)
    layout = _Layout(spec)
    scorer = _Scorer(layout, include_empty)
    part_lists = layout.partition().as_lists()
    visited = 0
    viol = dict.fromkeys(BASE_CASE_CHECKS, 0)
    witnesses = []
    violators = {}
    omegas = set()
    for s0 in seeds:
        for s1 in range(1 << scorer.n1):
            b = scorer.block(s0, s1)
            if b is None:
                continue
            visited += len(b["e"])
            omegas.update(np.unique(b["omega"]).tolist())
            for name, passed in scorer.checks(b).items():
                bad = np.nonzero(~passed)[0]
                viol[name] += len(bad)
                for pos in bad:
                    g = layout.graph((s0, s1, int(b["s2"][pos])))
                    if name == "ineq8":
                        key = canonical_form(g)
                        if key not in violators:
                            violators[key] = (encode_graph6(g), int(b["t"][pos]), int(b["m2"][pos]), int(b["e"][pos]))
                    elif len(witnesses) < max_witnesses:
                        wit = {k: int(b[k][pos]) for k in ("e", "t", "m0", "m2", "f0", "omega")}
                        witnesses.append(VerificationReport(name, encode_graph6(g), part_lists, wit["t"], 0,
                                                            ">=", False, wit))
    return visited, viol, witnesses, violators, omegas


def run_base_case(
    spec: BaseCaseSpec | tuple[int, int, int],
    include_empty_subsets: bool = True,
    strategy: str = "classes",
    jobs: int = 1,
) -> BaseCaseResult:
    """Full search of one r = 3 case with ``a >= 1``.

    ``include_empty_subsets=False`` skips graphs where either iterated
    (non-seeded) pair of cliques has no cross edges.
    """
    if not isinstance(spec, BaseCaseSpec):
        spec = BaseCaseSpec(*spec)
    if spec.a < 1:
        raise K4TriError("cases with a = 0 are covered by check_a0_cases")
    layout = _Layout(spec)
    seeds = layout.seed_masks(strategy)
    if jobs <= 1:
        parts = [_run_seeds(spec.as_tuple(), seeds, include_empty_subsets)]
    else:
        chunks = [seeds[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_seeds, spec.as_tuple(), ch, include_empty_subsets)
                       for ch in chunks if ch]
            parts = [f.result() for f in futures]
    visited = 0
    viol = dict.fromkeys(BASE_CASE_CHECKS, 0)
    witnesses = []
    violators = {}
    omegas = set()
    for v, vi, w, vs, om in parts:
        visited += v
        for k in vi:
            viol[k] += vi[k]
        witnesses.extend(w)
        for key, val in vs.items():
            violators.setdefault(key, val)
        omegas |= om
    witnesses.sort(key=lambda rep: (rep.check, rep.graph6))
    records = []
    part_lists = layout.partition().as_lists()
    for key in sorted(violators):
        g6, t, m2, e = violators[key]
        records.append(CounterexampleRecord(
            case=spec.as_tuple(), graph6=g6, canonical=key.hex(), t=t, m2=m2, e=e,
            partition=part_lists, matched=_match(g6),
        ))
    return BaseCaseResult(spec, strategy, include_empty_subsets, records, visited, viol,
                          witnesses, omegas, len(seeds))


def _match(g6: str) -> str | None:
    from .graph import parse_graph6

    return match_bad_graph(parse_graph6(g6))


def enumerate_base_case(spec, include_empty_subsets: bool = True, strategy: str = "classes",
                        jobs: int = 1) -> list[CounterexampleRecord]:
    """Violators of ``t >= M2 + e - 3(n-3)``, one per isomorphism class."""
    return run_base_case(spec, include_empty_subsets, strategy, jobs).records


def rescore(record: CounterexampleRecord) -> tuple[int, int, int]:
    """Recompute (t, M2, e) of a record from its graph6 and partition."""
    from .graph import parse_graph6

    g = parse_graph6(record.graph6)
    s = partition_stats(g, CliquePartition(record.partition))
    return (s.t, s.m2, s.e)


def check_a0_cases() -> VerificationReport:
    """All r = 3 greedy partitions with no triangle part.

    Verifies e - 3n + 9 <= 0 and t = M2 = omega = 0 on every such graph.
    """
    worst = None
    count = 0
    failures = []
    for case in ((0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)):
        spec = BaseCaseSpec(*case)
        layout = _Layout(spec)
        p = layout.partition()
        nbits = [len(x) for x in layout.slot_edges]
        for masks in np.ndindex(*(1 << k for k in nbits)):
            masks = tuple(int(m) for m in masks)
            if any(all(req & m == req for req, m in zip(f, masks)) for f in layout.forbidden):
                continue
            g = layout.graph(masks)
            s = partition_stats(g, p)
            count += 1
            slack = s.e - 3 * s.n + 9
            worst = slack if worst is None else max(worst, slack)
            if slack > 0 or s.t or s.m2 or s.omega:
                failures.append(encode_graph6(g))
    return VerificationReport(
        check="a0-cases", graph6="", partition=None, lhs=0, rhs=worst if worst is not None else 0,
        relation=">=", holds=not failures,
        witness={"graphs": count, "max_e_minus_3n_plus_9": worst, "failures": failures[:20]},
    )


# -- Table 1 ----------------------------------------------------------------


def table1_rows(results: list[BaseCaseResult]) -> list[dict]:
    rows = []
    for res in results:
        recs = sorted(res.records, key=lambda r: (r.matched or "~", r.canonical))
        rows.append({
            "a": res.spec.a, "b": res.spec.b, "c": res.spec.c,
            "constant": res.spec.constant,
            "class_count": len(recs),
            "classes": [r.matched for r in recs],
            "graph6": [r.graph6 for r in recs],
            "t": [r.t for r in recs],
            "m2": [r.m2 for r in recs],
            "e": [r.e for r in recs],
        })
    return rows


def table1_matches(results: list[BaseCaseResult]) -> list[str]:
    """Differences between the computed table and the expected one (empty if equal)."""
    diffs = []
    for res in results:
        case = res.spec.as_tuple()
        want = TABLE1_EXPECTED[case]
        got = {}
        for rec in res.records:
            if rec.matched is None:
                diffs.append(f"{case}: unmatched class {rec.graph6} {rec.params()}")
                continue
            got[rec.matched] = rec.params()
        if len(res.records) != len(want) or got != want:
            diffs.append(f"{case}: expected {want}, got {got} ({len(res.records)} classes)")
    return diffs


# -- random instances -----------------------------------------------------


def random_k4free(n: int, density: float, seed: int) -> Graph:
    """Random K4-free graph: visit all pairs in shuffled order and insert each
    with probability ``density`` unless it would complete a K4.

    One uniform draw is consumed per pair regardless of density, so the
    stream layout is the same for every density.
    """
    if not 1 <= n <= 64:
        raise K4TriError(f"n must be in 1..64, got {n}")
    rng = XorShift64Star(seed)
    pairs = list(combinations(range(n), 2))
    rng.shuffle(pairs)
    rows = [0] * n
    for u, v in pairs:
        x = rng.random()
        if x >= density:
            continue
        common = rows[u] & rows[v]
        if any(rows[w] & common for w in _bits(common)):
            continue
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def k4free_graphs(n: int):
    """All labelled K4-free graphs on ``n`` vertices."""
    from .graph import all_graphs

    for g in all_graphs(n):
        if not has_clique(g, 4):
            yield g
