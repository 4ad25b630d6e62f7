"""Greedy clique partitions and the triangle-count statistics built on them.

For a greedy partition ``P = (T_1, ..., T_r)`` of a K4-free graph every part
has 1, 2 or 3 vertices; ``a``, ``b``, ``c`` count the parts of each size.
The pair/triple tables hold edge and triangle counts of the subgraphs induced
on unions of two or three parts, and every derived quantity (``m0``, ``f0``,
``omega``, ``g``) is computed from those tables in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Iterator, Sequence

from .errors import InvalidPartitionError, NotK4FreeError, UnsupportedSizeError
from .graph import (
    Graph,
    canonical_form,
    clique_number,
    encode_graph6,
    has_clique,
    induced_subgraph,
    iter_cliques,
    triangle_list,
)
from .report import VerificationReport, compare

ENUMERATE_MAX_VERTICES = 12


@dataclass(frozen=True)
class CliquePartition:
    parts: tuple[tuple[int, ...], ...]

    def __init__(self, parts: Sequence[Sequence[int]]):
        object.__setattr__(self, "parts", tuple(tuple(sorted(p)) for p in parts))

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]

    def counts(self) -> tuple[int, int, int]:
        """Number of parts of size 3, 2 and 1."""
        s = self.sizes
        return s.count(3), s.count(2), s.count(1)

    def as_lists(self) -> list[list[int]]:
        return [list(p) for p in self.parts]

    def relabel(self, perm: Sequence[int]) -> CliquePartition:
        return CliquePartition([[perm[v] for v in p] for p in self.parts])

    def key(self) -> frozenset[frozenset[int]]:
        """Set-partition identity, ignoring part order."""
        return frozenset(frozenset(p) for p in self.parts)


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _check_cover(g: Graph, p: CliquePartition) -> None:
    seen = 0
    for part in p.parts:
        if not part:
            raise InvalidPartitionError("empty part")
        m = _mask(part)
        if max(part) >= g.n or min(part) < 0:
            raise InvalidPartitionError(f"part {part} has a vertex outside the graph")
        if seen & m:
            raise InvalidPartitionError("parts are not disjoint")
        seen |= m
    if seen != (1 << g.n) - 1:
        raise InvalidPartitionError("parts do not cover every vertex")


def verify_greedy(g: Graph, p: CliquePartition) -> bool:
    """True iff ``p`` is a greedy partition of ``g``.

    Raises InvalidPartitionError when ``p`` is not a partition of V(g) at all.
    """
    _check_cover(g, p)
    for part in p.parts:
        for u, v in combinations(part, 2):
            if not g.has_edge(u, v):
                return False
    sizes = p.sizes
    if any(sizes[i] < sizes[i + 1] for i in range(len(sizes) - 1)):
        return False
    for ell in range(1, max(sizes, default=0) + 1):
        union = _mask(v for part in p.parts if len(part) <= ell for v in part)
        if has_clique(g, ell + 1, union):
            return False
    return True


def greedy_partition(g: Graph) -> CliquePartition:
    """Deterministic greedy partition: repeatedly remove the lexicographically
    smallest maximum clique of what remains."""
    if has_clique(g, 4):
        raise NotK4FreeError("graph contains K4")
    rem = (1 << g.n) - 1
    parts = []
    while rem:
        s = clique_number(g, rem)
        clique = next(iter_cliques(g, s, rem))
        parts.append(clique)
        rem &= ~_mask(clique)
    return CliquePartition(parts)


def iter_greedy_partitions(g: Graph) -> Iterator[CliquePartition]:
    """Every greedy partition of ``g`` exactly once.

    Parts of equal size are emitted in increasing order of their smallest
    vertex, which makes each set partition correspond to one branch.
    """
    if g.n > ENUMERATE_MAX_VERTICES:
        raise UnsupportedSizeError(f"greedy partition enumeration supports n <= {ENUMERATE_MAX_VERTICES}")

    def rec(rem: int, prev_size: int, prev_min: int, acc: list) -> Iterator[CliquePartition]:
        if not rem:
            yield CliquePartition(acc)
            return
        s = clique_number(g, rem)
        for clique in iter_cliques(g, s, rem):
            if s == prev_size and clique[0] < prev_min:
                continue
            acc.append(clique)
            yield from rec(rem & ~_mask(clique), s, clique[0], acc)
            acc.pop()

    yield from rec((1 << g.n) - 1, 0, -1, [])


def enumerate_greedy_partitions(g: Graph, limit: int | None = None) -> list[CliquePartition]:
    out = []
    for p in iter_greedy_partitions(g):
        if limit is not None and len(out) >= limit:
            break
        out.append(p)
    return out


# -- statistics -----------------------------------------------------------


@dataclass
class PartitionStats:
    n: int
    e: int
    t: int
    r: int
    a: int
    b: int
    c: int
    sizes: list[int]
    e_pair: dict[tuple[int, int], int]
    t_pair: dict[tuple[int, int], int]
    e_triple: dict[tuple[int, int, int], int]
    t_triple: dict[tuple[int, int, int], int]
    m1: int
    m2: int
    m3: int
    m0: int
    f0: int
    omega: int
    g: int
    bad_triples: list[tuple[int, int, int]] = field(default_factory=list)

    def scalars(self) -> dict[str, int]:
        names = ("n", "e", "t", "r", "a", "b", "c", "m0", "m1", "m2", "m3", "f0", "omega", "g")
        return {k: getattr(self, k) for k in names}

    @property
    def triple_sum(self) -> int:
        return sum(self.t_triple.values())


# Signatures (vertices, edges, triangles) of the four bad graphs.
BAD_SIGNATURES = {(9, 22, 11), (9, 23, 14), (9, 22, 13), (8, 18, 10)}


def _bad_forms() -> dict[bytes, str]:
    from .atlas import bad_graph_forms

    return bad_graph_forms()


def _is_bad_union(g: Graph, parts: Sequence[Sequence[int]], e_sub: int, t_sub: int) -> bool:
    nsub = sum(len(x) for x in parts)
    if (nsub, e_sub, t_sub) not in BAD_SIGNATURES:
        return False
    h = induced_subgraph(g, [v for x in parts for v in x])
    return canonical_form(h) in _bad_forms()


def partition_stats(g: Graph, p: CliquePartition, check: bool = True) -> PartitionStats:
    if check and not verify_greedy(g, p):
        raise InvalidPartitionError("partition is not greedy")
    r = p.r
    sizes = p.sizes
    a, b, c = p.counts()
    part_of = [0] * g.n
    for i, part in enumerate(p.parts):
        for v in part:
            part_of[v] = i

    cross: dict[tuple[int, int], int] = {}
    for u, v in g.edges():
        i, j = sorted((part_of[u], part_of[v]))
        if i != j:
            cross[(i, j)] = cross.get((i, j), 0) + 1

    tri_in = [0] * r
    t2: dict[tuple[int, int], int] = {}
    t3: dict[tuple[int, int, int], int] = {}
    tris = triangle_list(g)
    for tri in tris:
        key = tuple(sorted({part_of[v] for v in tri}))
        if len(key) == 1:
            tri_in[key[0]] += 1
        elif len(key) == 2:
            t2[key] = t2.get(key, 0) + 1
        else:
            t3[key] = t3.get(key, 0) + 1

    e_in = [comb(s, 2) for s in sizes]
    e_pair, t_pair = {}, {}
    for i, j in combinations(range(r), 2):
        e_pair[(i, j)] = e_in[i] + e_in[j] + cross.get((i, j), 0)
        t_pair[(i, j)] = tri_in[i] + tri_in[j] + t2.get((i, j), 0)
    e_triple, t_triple = {}, {}
    for i, j, k in combinations(range(r), 3):
        e_triple[(i, j, k)] = (
            e_in[i] + e_in[j] + e_in[k]
            + cross.get((i, j), 0) + cross.get((i, k), 0) + cross.get((j, k), 0)
        )
        t_triple[(i, j, k)] = (
            tri_in[i] + tri_in[j] + tri_in[k]
            + t2.get((i, j), 0) + t2.get((i, k), 0) + t2.get((j, k), 0)
            + t3.get((i, j, k), 0)
        )

    m0 = sum(2 * (e_pair[(i, j)] - 2 * (sizes[i] + sizes[j] - 2)) for i, j in e_pair) - a * (r - 1)
    f0 = sum(3 * (e_triple[key] - 3 * (sizes[key[0]] + sizes[key[1]] + sizes[key[2]] - 3)) for key in e_triple)
    bad = [
        key
        for key in e_triple
        if _is_bad_union(g, [p.parts[x] for x in key], e_triple[key], t_triple[key])
    ]
    n, e, t = g.n, g.num_edges, len(tris)
    return PartitionStats(
        n=n, e=e, t=t, r=r, a=a, b=b, c=c, sizes=sizes,
        e_pair=e_pair, t_pair=t_pair, e_triple=e_triple, t_triple=t_triple,
        m1=sum(tri_in), m2=sum(t2.values()), m3=sum(t3.values()),
        m0=m0, f0=f0, omega=len(bad), g=r * (e - r * (n - r)) - t, bad_triples=bad,
    )


def bad_triple_count(g: Graph, p: CliquePartition) -> int:
    """Number of part triples whose union induces a copy of F1, F2, F3 or F4."""
    return partition_stats(g, p).omega


def m0_closed_form(n: int, e: int, r: int, a: int) -> int:
    return 2 * e - 2 * (n - r) * r + a * (r - 3)


def f0_closed_form(n: int, e: int, r: int, a: int) -> int:
    # a(r-2)(r-3) is a product of consecutive integers times a, hence even
    return 3 * e * (r - 2) - 3 * (n - r) * r * (r - 2) + 3 * a * (r - 2) * (r - 3) // 2


def half_term(a: int, r: int) -> int:
    """(a/2)(r-1)(r-2), always an integer."""
    return a * (r - 1) * (r - 2) // 2


def conjectured_bound(n: int, e: int, r: int) -> int:
    return r * (e - r * (n - r))


# -- checks ---------------------------------------------------------------


def _report(name, g, p, lhs, rhs, relation, stats, holds=None, **extra) -> VerificationReport:
    witness = stats.scalars()
    witness.update(extra)
    return VerificationReport(
        check=name,
        graph6=encode_graph6(g),
        partition=p.as_lists(),
        lhs=lhs,
        rhs=rhs,
        relation=relation,
        holds=compare(lhs, rhs, relation) if holds is None else holds,
        witness=witness,
    )


def _stats(g, p, stats):
    return stats if stats is not None else partition_stats(g, p)


def check_main_theorem(g, p, stats=None) -> VerificationReport:
    """t >= r(e - r(n-r)) - omega."""
    s = _stats(g, p, stats)
    return _report("main-theorem", g, p, s.t, conjectured_bound(s.n, s.e, s.r) - s.omega, ">=", s)


def check_conjecture12(g, p, stats=None) -> VerificationReport:
    """The original conjecture t >= r(e - r(n-r)), i.e. g(G,P) <= 0."""
    s = _stats(g, p, stats)
    return _report("conjecture12", g, p, s.t, conjectured_bound(s.n, s.e, s.r), ">=", s,
                   orientation="g = r(e - r(n-r)) - t")


def check_eq3_identity(g, p, stats=None) -> VerificationReport:
    s = _stats(g, p, stats)
    rhs = s.triple_sum - (s.r - 3) * s.m2 - half_term(s.a, s.r) + s.a
    return _report("eq3", g, p, s.t, rhs, "==", s, triple_sum=s.triple_sum)


def check_lemma31(g, p, stats=None) -> VerificationReport:
    """M2 >= M0, together with the pairwise bound t_ij >= 2(e_ij - 2(|T_i|+|T_j|-2))."""
    s = _stats(g, p, stats)
    failing = []
    for (i, j), e_ij in s.e_pair.items():
        if s.t_pair[(i, j)] < 2 * (e_ij - 2 * (s.sizes[i] + s.sizes[j] - 2)):
            failing.append([i, j])
    holds = s.m2 >= s.m0 and not failing
    return _report("lemma31", g, p, s.m2, s.m0, ">=", s, holds=holds, failing_pairs=failing)


def check_key_lemma(g, p, stats=None) -> VerificationReport:
    s = _stats(g, p, stats)
    slack = s.m2 - s.m0
    rhs = s.f0 + (s.r - 2) * slack - s.omega
    return _report("key-lemma", g, p, s.triple_sum, rhs, ">=", s, triple_sum=s.triple_sum, C=slack)


def check_appendixA_identity(g, p, stats=None) -> VerificationReport:
    """F0 - (r-3) M0 - (a/2)(r-1)(r-2) + a == r(e - r(n-r)); also checks the
    closed forms of M0 and F0 in terms of (n, e, r, a)."""
    s = _stats(g, p, stats)
    lhs = s.f0 - (s.r - 3) * s.m0 - half_term(s.a, s.r) + s.a
    rhs = conjectured_bound(s.n, s.e, s.r)
    m0_cf = m0_closed_form(s.n, s.e, s.r, s.a)
    f0_cf = f0_closed_form(s.n, s.e, s.r, s.a)
    holds = lhs == rhs and s.m0 == m0_cf and s.f0 == f0_cf
    return _report("appendixA", g, p, lhs, rhs, "==", s, holds=holds, m0_closed=m0_cf, f0_closed=f0_cf)


def check_omega_bound(g, p, stats=None) -> VerificationReport:
    """omega <= C(r, 3)."""
    s = _stats(g, p, stats)
    return _report("omega-bound", g, p, comb(s.r, 3), s.omega, ">=", s)


PARTITION_CHECKS: dict[str, Callable[..., VerificationReport]] = {
    "main-theorem": check_main_theorem,
    "conjecture12": check_conjecture12,
    "eq3": check_eq3_identity,
    "lemma31": check_lemma31,
    "key-lemma": check_key_lemma,
    "appendixA": check_appendixA_identity,
    "omega-bound": check_omega_bound,
}
