"""Exact maximum edge-disjoint triangle packing on small graphs.

The solver is a branch and bound for a maximum independent set in the
triangle conflict graph (two triangles clash when they share an edge).
Triangles through a common edge pairwise clash, so covering the candidates
by such groups bounds how many more can be chosen.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import PackingBudgetExceeded
from .graph import Graph, encode_graph6, triangle_list
from .partition import CliquePartition, partition_stats
from .report import VerificationReport

TRIANGLE_BUDGET = 200


@dataclass(frozen=True)
class TrianglePacking:
    triples: tuple[tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.triples)

    def to_json(self, g: Graph) -> str:
        return json.dumps({"graph6": encode_graph6(g), "triples": [list(t) for t in self.triples]})


def _edge_masks(g: Graph, tris):
    index = {e: i for i, e in enumerate(g.edges())}
    return [(1 << index[(a, b)]) | (1 << index[(a, c)]) | (1 << index[(b, c)]) for a, b, c in tris]


def is_valid_packing(g: Graph, triples) -> bool:
    """Independent re-check: every triple is a triangle and no edge repeats."""
    seen = set()
    for t in triples:
        a, b, c = sorted(t)
        if not (a < b < c and g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)):
            return False
        for e in ((a, b), (a, c), (b, c)):
            if e in seen:
                return False
            seen.add(e)
    return True


def max_edge_disjoint_triangles(g: Graph, budget: int = TRIANGLE_BUDGET) -> TrianglePacking:
    """A maximum set of pairwise edge-disjoint triangles.

    Raises PackingBudgetExceeded when the graph has more than ``budget``
    triangles.  The result is deterministic.
    """
    tris = triangle_list(g)
    if len(tris) > budget:
        raise PackingBudgetExceeded(f"{len(tris)} triangles exceed the packing budget of {budget}")
    if not tris:
        return TrianglePacking(())
    masks = _edge_masks(g, tris)
    conflict = [sum(1 for j, mj in enumerate(masks) if j != i and mj & mi) for i, mi in enumerate(masks)]
    # high conflict degree first, lexicographic triple on ties; bit i of a
    # candidate set is the i-th triangle in this order
    order = sorted(range(len(tris)), key=lambda i: (-conflict[i], tris[i]))
    ordered = [masks[i] for i in order]
    m = len(ordered)
    clash = [sum(1 << j for j in range(m) if ordered[j] & ordered[i]) for i in range(m)]
    on_edge = {}
    for i, mk in enumerate(ordered):
        for e in _bits(mk):
            on_edge[e] = on_edge.get(e, 0) | (1 << i)
    edges_of = [[on_edge[e] for e in _bits(mk)] for mk in ordered]

    def cover_bound(cand: int) -> int:
        # triangles through one edge pairwise clash, so a cover of the
        # candidates by such groups bounds how many can still be chosen
        count = 0
        while cand:
            low = (cand & -cand).bit_length() - 1
            cand &= ~max((grp & cand for grp in edges_of[low]), key=int.bit_count)
            count += 1
        return count

    # initial incumbent: greedy from the least-conflicting end
    best = []
    used = 0
    for i in sorted(range(m), key=lambda i: (conflict[order[i]], tris[order[i]])):
        if not ordered[i] & used:
            used |= ordered[i]
            best.append(i)

    def search(cand: int, chosen: list):
        nonlocal best
        if not cand:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + cover_bound(cand) <= len(best):
            return
        low = (cand & -cand).bit_length() - 1
        chosen.append(low)
        search(cand & ~clash[low], chosen)
        chosen.pop()
        search(cand & ~(1 << low), chosen)

    search((1 << m) - 1, [])
    return TrianglePacking(tuple(sorted(tris[order[i]] for i in best)))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def naive_max_packing(g: Graph) -> int:
    """Packing number by trying subsets from the largest size down.  Slow; for tests."""
    tris = triangle_list(g)
    masks = _edge_masks(g, tris)
    for k in range(min(len(tris), g.num_edges // 3), 0, -1):
        for combo in combinations(masks, k):
            used = 0
            for mk in combo:
                if mk & used:
                    break
                used |= mk
            else:
                return k
    return 0


def _packing_report(name, g, p, lhs, rhs, holds, packing, **extra) -> VerificationReport:
    witness = {"t_e": len(packing), "packing": [list(t) for t in packing.triples]}
    witness.update(extra)
    return VerificationReport(
        check=name, graph6=encode_graph6(g), partition=p.as_lists() if p is not None else None,
        lhs=lhs, rhs=rhs, relation=">=", holds=holds, witness=witness,
    )


def check_huang_shi(g: Graph, p: CliquePartition, packing: TrianglePacking | None = None) -> VerificationReport:
    """t_e * r >= t."""
    if packing is None:
        packing = max_edge_disjoint_triangles(g)
    s = partition_stats(g, p)
    lhs = len(packing) * s.r
    return _packing_report("huang-shi", g, p, lhs, s.t, lhs >= s.t, packing, t=s.t, r=s.r)


def check_theorem11(g: Graph, packing: TrianglePacking | None = None) -> VerificationReport:
    """With m = e - floor(n^2/4): m <= 0 or t_e >= m."""
    if packing is None:
        packing = max_edge_disjoint_triangles(g)
    m = g.num_edges - g.n * g.n // 4
    return _packing_report("theorem11", g, None, len(packing), m, m <= 0 or len(packing) >= m, packing)


def check_conjecture_te(g: Graph, p: CliquePartition, packing: TrianglePacking | None = None) -> VerificationReport:
    """t_e >= e - r(n-r)."""
    if packing is None:
        packing = max_edge_disjoint_triangles(g)
    rhs = g.num_edges - p.r * (g.n - p.r)
    return _packing_report("conjecture-te", g, p, len(packing), rhs, len(packing) >= rhs, packing)


def check_packing_theorem_bound(g: Graph, p: CliquePartition,
                                packing: TrianglePacking | None = None) -> VerificationReport:
    """t_e * r >= r(e - r(n-r)) - omega, the packing form of the corrected bound."""
    if packing is None:
        packing = max_edge_disjoint_triangles(g)
    s = partition_stats(g, p)
    lhs = len(packing) * s.r
    rhs = s.r * (s.e - s.r * (s.n - s.r)) - s.omega
    return _packing_report("packing-bound", g, p, lhs, rhs, lhs >= rhs, packing, omega=s.omega)


PACKING_CHECKS = ("huang-shi", "theorem11", "conjecture-te", "packing-bound")
