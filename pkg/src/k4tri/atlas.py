"""The four bad graphs F1-F4, their k-blow-ups, and closed-form statistics.

Each base graph consists of three cliques (three triangles, or for F4 two
triangles and an edge) plus a pinned set of cross edges.  The edge lists are
validated on first use: K4-freeness, cross-edge counts per pair of cliques,
the exact triangle list, and (v, e, t).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, product

from .errors import K4TriError, UnsupportedSizeError
from .graph import MAX_VERTICES, Graph, canonical_form, encode_graph6, is_kk_free, triangle_count, triangle_list
from .partition import CliquePartition, verify_greedy


class BaseGraphId(str, Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"


_PARTS_9 = ("abc", "def", "ghi")

# cross edges, grouped as (T1-T2, T2-T3, T1-T3)
_DEFS = {
    BaseGraphId.F1: (_PARTS_9, ("ae af bd ce", "dh eg fg fi", "ah bg bi ch ci")),
    BaseGraphId.F2: (_PARTS_9, ("ad af bf cd ce", "dg di eg eh fi", "ah bg bh ci")),
    BaseGraphId.F3: (_PARTS_9, ("ad af bf cd ce", "dg di eg eh fi", "ah bg bh")),
    BaseGraphId.F4: (("abc", "de", "fgh"), ("ad ae cd", "df ef eh", "ag bf bh cg ch")),
}

# (v, e, t), cross-edge counts (T1-T2, T2-T3, T1-T3), and the triangle lists
_EXPECTED = {
    BaseGraphId.F1: ((9, 22, 11), (4, 4, 5),
                     "abc ace ach aef bci bgi chi def efg fgi ghi"),
    BaseGraphId.F2: ((9, 23, 14), (5, 5, 4),
                     "abc abf abh acd adf bgh cde cdi def deg dfi dgi egh ghi"),
    BaseGraphId.F3: ((9, 22, 13), (5, 5, 3),
                     "abc abf abh acd adf bgh cde def deg dfi dgi egh ghi"),
    BaseGraphId.F4: ((8, 18, 10), (3, 3, 5),
                     "abc acd acg ade bch bfh cgh def efh fgh"),
}


@dataclass(frozen=True)
class BlowUpSpec:
    base: BaseGraphId
    k: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "base", BaseGraphId(self.base))
        k = tuple(int(x) for x in self.k)
        if len(k) != 3 or min(k) < 1:
            raise K4TriError(f"blow-up vector must be three positive integers, got {self.k}")
        object.__setattr__(self, "k", k)


@dataclass(frozen=True)
class AtlasEntry:
    graph: Graph
    partition: CliquePartition
    labels: dict[str, int]
    spec: BlowUpSpec

    def sidecar(self) -> dict:
        cf = closed_form_stats(self.spec)
        return {
            "id": self.spec.base.value,
            "k": list(self.spec.k),
            "graph6": encode_graph6(self.graph),
            "partition": self.partition.as_lists(),
            "labels": self.labels,
            "expected": cf.as_dict(),
        }


def _sized_order(parts):
    """Parts listed by non-increasing size, stable otherwise."""
    return sorted(parts, key=len, reverse=True)


def _raw_base(gid: BaseGraphId):
    parts, cross = _DEFS[gid]
    names = "".join(parts)
    index = {ch: i for i, ch in enumerate(names)}
    edges = [(index[x], index[y]) for part in parts for x, y in combinations(part, 2)]
    for group in cross:
        edges += [(index[x], index[y]) for x, y in group.split()]
    g = Graph.from_edges(len(names), edges)
    part_idx = [[index[ch] for ch in part] for part in parts]
    return g, part_idx, index


def _validate(gid: BaseGraphId) -> None:
    g, parts, index = _raw_base(gid)
    (v, e, t), cross_counts, tri_text = _EXPECTED[gid]
    if not is_kk_free(g, 4):
        raise AssertionError(f"{gid.value} contains K4")
    if (g.n, g.num_edges, triangle_count(g)) != (v, e, t):
        raise AssertionError(f"{gid.value} has wrong (v, e, t)")
    for (x, y), want in zip(((0, 1), (1, 2), (0, 2)), cross_counts):
        got = sum(g.has_edge(u, w) for u in parts[x] for w in parts[y])
        if got != want:
            raise AssertionError(f"{gid.value}: {got} cross edges between parts {x}, {y}; want {want}")
    expected = sorted(tuple(sorted(index[ch] for ch in word)) for word in tri_text.split())
    if triangle_list(g) != expected:
        raise AssertionError(f"{gid.value} triangle list differs from the pinned list")


@lru_cache(maxsize=None)
def base_graph(gid: BaseGraphId | str) -> AtlasEntry:
    gid = BaseGraphId(gid)
    _validate(gid)
    g, parts, index = _raw_base(gid)
    p = CliquePartition(_sized_order(parts))
    if not verify_greedy(g, p):
        raise AssertionError(f"{gid.value} partition is not greedy")
    return AtlasEntry(g, p, dict(index), BlowUpSpec(gid, (1, 1, 1)))


def expected_triangle_names(gid: BaseGraphId | str) -> list[str]:
    return sorted(_EXPECTED[BaseGraphId(gid)][2].split())


def blow_up(spec: BlowUpSpec) -> AtlasEntry:
    """Replace each vertex of the j-th base clique by k_j pairwise non-adjacent
    copies; copies are adjacent iff their originals are.

    Vertices are numbered part by part, copy-index-major, so copy ``c`` of
    part ``j`` is a contiguous block.
    """
    base_parts, _ = _DEFS[spec.base]
    g0, parts0, index0 = _raw_base(spec.base)
    n = sum(len(part) * kj for part, kj in zip(parts0, spec.k))
    if n > MAX_VERTICES:
        raise UnsupportedSizeError(f"blow-up has {n} > {MAX_VERTICES} vertices")
    origin = []  # new vertex -> base vertex
    labels = {}
    blocks = []
    for part, names, kj in zip(parts0, base_parts, spec.k):
        for copy in range(kj):
            block = []
            for v, name in zip(part, names):
                labels[f"{name}{copy + 1}"] = len(origin)
                block.append(len(origin))
                origin.append(v)
            blocks.append(block)
    edges = [
        (x, y)
        for x, y in combinations(range(n), 2)
        if g0.has_edge(origin[x], origin[y])
    ]
    g = Graph.from_edges(n, edges)
    return AtlasEntry(g, CliquePartition(_sized_order(blocks)), labels, spec)


@dataclass(frozen=True)
class ClosedFormStats:
    v: int
    e: int
    r: int
    t: int
    g: int
    g_discrepancy: int

    def as_dict(self) -> dict[str, int]:
        return {"v": self.v, "e": self.e, "r": self.r, "t": self.t, "g": self.g,
                "g_discrepancy": self.g_discrepancy}


def closed_form_stats(spec: BlowUpSpec) -> ClosedFormStats:
    """Polynomial (v, e, r, t) of the blow-up with its blow-up partition.

    ``g`` is r(e - r(v - r)) - t evaluated from the polynomials, and
    ``g_discrepancy`` is the factored form of the same quantity; they agree.
    """
    k1, k2, k3 = spec.k
    sq = k1 * k1 + k2 * k2 + k3 * k3
    cube = k1 ** 3 + k2 ** 3 + k3 ** 3
    r = k1 + k2 + k3
    base = spec.base
    if base is BaseGraphId.F1:
        v = 3 * r
        e = 3 * sq + 4 * k1 * k2 + 5 * k1 * k3 + 4 * k2 * k3
        t = (cube + k1 * k1 * k2 + 2 * k1 * k1 * k3 + k2 * k2 * k1 + k2 * k2 * k3
             + 2 * k3 * k3 * k1 + k3 * k3 * k2)
        gd = k1 * k2 * k3
    elif base is BaseGraphId.F2:
        v = 3 * r
        e = 3 * sq + 5 * k1 * k2 + 4 * k1 * k3 + 5 * k2 * k3
        t = (cube + 2 * k1 * k1 * k2 + k1 * k1 * k3 + 2 * k2 * k2 * k1 + 2 * k2 * k2 * k3
             + k3 * k3 * k1 + 2 * k3 * k3 * k2 + k1 * k2 * k3)
        gd = k1 * k2 * k3
    elif base is BaseGraphId.F3:
        v = 3 * r
        e = 3 * sq + 5 * k1 * k2 + 3 * k1 * k3 + 5 * k2 * k3
        t = (cube + 2 * k1 * k1 * k2 + k1 * k1 * k3 + 2 * k2 * k2 * k1 + 2 * k2 * k2 * k3
             + k3 * k3 * k1 + 2 * k3 * k3 * k2)
        gd = k1 * k3 * (k2 - k1 - k3)
    else:
        v = 3 * k1 + 2 * k2 + 3 * k3
        e = 3 * k1 * k1 + k2 * k2 + 3 * k3 * k3 + 3 * k1 * k2 + 5 * k1 * k3 + 3 * k2 * k3
        t = (k1 ** 3 + k3 ** 3 + k1 * k1 * k2 + 2 * k1 * k1 * k3 + k2 * k2 * k1 + k2 * k2 * k3
             + 2 * k3 * k3 * k1 + k3 * k3 * k2)
        gd = k2 * (k1 * k3 - k1 * k2 - k2 * k3)
    g = r * (e - r * (v - r)) - t
    return ClosedFormStats(v, e, r, t, g, gd)


def vertex_count(spec: BlowUpSpec) -> int:
    k1, k2, k3 = spec.k
    return 3 * (k1 + k3) + (2 if spec.base is BaseGraphId.F4 else 3) * k2


def computed_stats(entry: AtlasEntry) -> dict[str, int]:
    """(v, e, r, t, g) measured on the constructed graph."""
    g = entry.graph
    n, e, t, r = g.n, g.num_edges, triangle_count(g), entry.partition.r
    return {"v": n, "e": e, "r": r, "t": t, "g": r * (e - r * (n - r)) - t}


def counterexample_stream(
    gid: BaseGraphId | str, g_min: int = 1, limit: int = 10, max_vertices: int = MAX_VERTICES
) -> list[BlowUpSpec]:
    """Blow-up specs whose discrepancy is at least ``g_min``, ordered by
    vertex count and then lexicographically by k.

    Every returned spec is built and re-measured; a mismatch with the closed
    form raises AssertionError.
    """
    gid = BaseGraphId(gid)
    if g_min < 1:
        raise K4TriError("g_min must be positive")
    mid = 2 if gid is BaseGraphId.F4 else 3
    found = []
    for nv in range(8, max_vertices + 1):
        ks = []
        for k1, k3 in product(range(1, nv // 3 + 1), repeat=2):
            rest = nv - 3 * (k1 + k3)
            if rest >= mid and rest % mid == 0:
                ks.append((k1, rest // mid, k3))
        for k in sorted(ks):
            spec = BlowUpSpec(gid, k)
            cf = closed_form_stats(spec)
            if cf.g < g_min:
                continue
            entry = blow_up(spec)
            measured = computed_stats(entry)
            if measured != {"v": cf.v, "e": cf.e, "r": cf.r, "t": cf.t, "g": cf.g}:
                raise AssertionError(f"closed form disagrees with construction for {spec}")
            if not verify_greedy(entry.graph, entry.partition):
                raise AssertionError(f"blow-up partition not greedy for {spec}")
            found.append(spec)
            if len(found) >= limit:
                return found
    return found


@lru_cache(maxsize=None)
def bad_graph_forms() -> dict[bytes, str]:
    """Canonical form of each base graph, mapped to its id."""
    return {canonical_form(base_graph(gid).graph): gid.value for gid in BaseGraphId}


def match_bad_graph(g: Graph) -> str | None:
    if g.n not in (8, 9):
        return None
    return bad_graph_forms().get(canonical_form(g))
