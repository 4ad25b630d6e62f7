from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k4tri.atlas import (
    BaseGraphId,
    BlowUpSpec,
    base_graph,
    blow_up,
    closed_form_stats,
    computed_stats,
    counterexample_stream,
    expected_triangle_names,
    match_bad_graph,
    vertex_count,
)
from k4tri.errors import K4TriError, UnsupportedSizeError
from k4tri.graph import Graph, is_isomorphic, is_kk_free, triangle_list
from k4tri.partition import partition_stats, verify_greedy
from oracles import edge_set, f_graph, naive_triangles

PAPER_VET = {"F1": (9, 22, 11), "F2": (9, 23, 14), "F3": (9, 22, 13), "F4": (8, 18, 10)}
CROSS = {"F1": (4, 4, 5), "F2": (5, 5, 4), "F3": (5, 5, 3), "F4": (3, 3, 5)}
# triangle lists as printed for each base graph
FOOTNOTE = {
    "F1": "abc ace ach aef bci bgi chi def efg fgi ghi",
    "F2": "abc abf abh acd adf bgh cde cdi def deg dfi dgi egh ghi",
    "F3": "abc abf abh acd adf bgh cde def deg dfi dgi egh ghi",
    "F4": "abc acd acg ade bch bfh cgh def efh fgh",
}


def names(entry, tris):
    inv = {v: k for k, v in entry.labels.items()}
    return sorted("".join(sorted(inv[v] for v in t)) for t in tris)


@pytest.mark.parametrize("gid", list(BaseGraphId))
def test_base_graph_oracle(gid):
    entry = base_graph(gid)
    g = entry.graph
    assert (g.n, g.num_edges, len(triangle_list(g))) == PAPER_VET[gid.value]
    assert is_kk_free(g, 4)
    assert names(entry, triangle_list(g)) == sorted(FOOTNOTE[gid.value].split())
    assert expected_triangle_names(gid) == sorted(FOOTNOTE[gid.value].split())
    assert verify_greedy(g, entry.partition)
    # same graph as the independently typed oracle
    n, edges, _ = f_graph(gid.value)
    assert edge_set(g) == edges
    assert naive_triangles(n, edges) == triangle_list(g)


@pytest.mark.parametrize("gid", list(BaseGraphId))
def test_cross_edge_counts(gid):
    _, _, parts = f_graph(gid.value)
    g = base_graph(gid).graph
    pairs = ((0, 1), (1, 2), (0, 2))
    got = tuple(sum(g.has_edge(u, v) for u in parts[i] for v in parts[j]) for i, j in pairs)
    assert got == CROSS[gid.value]


def test_f1_cross_edges_are_forced():
    # Among all graphs with three triangles abc/def/ghi, the printed cross
    # counts and exactly the printed triangle list, F1 is the only one.
    tri = sorted(FOOTNOTE["F1"].split())
    parts = [[0, 1, 2], [3, 4, 5], [6, 7, 8]]
    internal = [(u, v) for p in parts for u, v in combinations(p, 2)]
    # pairs inside a listed triangle must be edges; the remaining cross
    # edges are chosen freely from the other pairs to reach the counts
    covered = set()
    for word in tri:
        for x, y in combinations(word, 2):
            covered.add((ord(x) - 97, ord(y) - 97))
    cross_pairs = {(i, j): [(u, v) for u in parts[i] for v in parts[j]] for i, j in ((0, 1), (1, 2), (0, 2))}
    forced = {k: [e for e in v if e in covered] for k, v in cross_pairs.items()}
    free = {k: [e for e in v if e not in covered] for k, v in cross_pairs.items()}
    solutions = []
    for k, count in zip(((0, 1), (1, 2), (0, 2)), CROSS["F1"]):
        assert len(forced[k]) <= count
    extra_01 = combinations(free[(0, 1)], CROSS["F1"][0] - len(forced[(0, 1)]))
    for e01 in extra_01:
        for e12 in combinations(free[(1, 2)], CROSS["F1"][1] - len(forced[(1, 2)])):
            for e02 in combinations(free[(0, 2)], CROSS["F1"][2] - len(forced[(0, 2)])):
                edges = internal + [e for k in forced for e in forced[k]] + list(e01 + e12 + e02)
                g = Graph.from_edges(9, edges)
                got = sorted("".join(chr(97 + v) for v in t) for t in triangle_list(g))
                if got == tri:
                    solutions.append(g)
    assert len(solutions) == 1
    assert solutions[0] == base_graph("F1").graph


def test_blow_up_examples():
    e = blow_up(BlowUpSpec("F1", (1, 1, 1)))
    assert is_isomorphic(e.graph, base_graph("F1").graph)
    e = blow_up(BlowUpSpec("F1", (2, 2, 2)))
    assert computed_stats(e) == {"v": 18, "e": 88, "r": 6, "t": 88, "g": 8}
    assert vertex_count(BlowUpSpec("F4", (1, 2, 1))) == blow_up(BlowUpSpec("F4", (1, 2, 1))).graph.n == 10


def test_blow_up_copy_rule():
    base = base_graph("F2")
    e = blow_up(BlowUpSpec("F2", (2, 3, 1)))
    for x, y in combinations(e.labels, 2):
        u, v = e.labels[x], e.labels[y]
        want = base.graph.has_edge(base.labels[x[0]], base.labels[y[0]]) if x[0] != y[0] else False
        assert e.graph.has_edge(u, v) == want


def test_blow_up_partition_order_f4():
    # T1' and T3' are triangles, T2' is an edge; sizes must be non-increasing
    e = blow_up(BlowUpSpec("F4", (1, 1, 1)))
    assert e.partition.sizes == [3, 3, 2]
    assert verify_greedy(e.graph, e.partition)


def test_blow_up_errors():
    with pytest.raises(K4TriError):
        BlowUpSpec("F1", (0, 1, 1))
    with pytest.raises(K4TriError):
        BlowUpSpec("F1", (1, 1))
    with pytest.raises(UnsupportedSizeError):
        blow_up(BlowUpSpec("F1", (8, 8, 8)))
    with pytest.raises(ValueError):
        BlowUpSpec("F5", (1, 1, 1))


@given(st.sampled_from(list(BaseGraphId)), st.tuples(*[st.integers(1, 4)] * 3))
def test_closed_forms_match_construction(gid, k):
    spec = BlowUpSpec(gid, k)
    if vertex_count(spec) > 36:
        return
    e = blow_up(spec)
    cf = closed_form_stats(spec)
    assert computed_stats(e) == {"v": cf.v, "e": cf.e, "r": cf.r, "t": cf.t, "g": cf.g}
    assert cf.g == cf.g_discrepancy
    assert is_kk_free(e.graph, 4)
    assert verify_greedy(e.graph, e.partition)
    s = partition_stats(e.graph, e.partition)
    assert s.g == cf.g
    if gid in (BaseGraphId.F1, BaseGraphId.F2):
        assert s.omega == k[0] * k[1] * k[2]


def test_discrepancy_examples():
    assert closed_form_stats(BlowUpSpec("F3", (1, 3, 1))).g == 1
    assert closed_form_stats(BlowUpSpec("F4", (5, 1, 7))).g == 23
    for k in product(range(1, 4), repeat=3):
        assert closed_form_stats(BlowUpSpec("F1", k)).g == k[0] * k[1] * k[2]


def test_counterexample_stream():
    assert counterexample_stream("F1", 1, limit=1)[0].k == (1, 1, 1)
    assert (2, 2, 2) in [s.k for s in counterexample_stream("F1", 8, limit=50)]
    assert counterexample_stream("F3", 1, limit=1)[0].k == (1, 3, 1)
    stream = counterexample_stream("F4", 1, limit=5)
    assert all(closed_form_stats(s).g >= 1 for s in stream)
    keys = [(vertex_count(s), s.k) for s in stream]
    assert keys == sorted(keys)
    with pytest.raises(K4TriError):
        counterexample_stream("F1", 0)


def test_match_bad_graph():
    for gid in BaseGraphId:
        g = base_graph(gid).graph
        assert match_bad_graph(g.relabel(list(reversed(range(g.n))))) == gid.value
    assert match_bad_graph(Graph.complete_multipartite([3, 3, 3])) is None


def test_sidecar():
    side = blow_up(BlowUpSpec("F4", (1, 2, 1))).sidecar()
    assert side["id"] == "F4" and side["k"] == [1, 2, 1]
    assert side["expected"]["v"] == 10
    assert sorted(v for part in side["partition"] for v in part) == list(range(10))
