import json
from itertools import product

import pytest
from hypothesis import given

from k4tri.atlas import BaseGraphId, BlowUpSpec, base_graph, blow_up
from k4tri.enumeration import k4free_graphs
from k4tri.errors import PackingBudgetExceeded, UnsupportedSizeError
from k4tri.graph import Graph, triangle_count
from k4tri.packing import (
    check_conjecture_te,
    check_huang_shi,
    check_packing_theorem_bound,
    check_theorem11,
    is_valid_packing,
    max_edge_disjoint_triangles,
    naive_max_packing,
)
from k4tri.partition import greedy_partition
from oracles import edge_set, naive_packing_number
from strategies import graphs, k4free_graphs as k4free_strategy


def test_packing_examples():
    assert len(max_edge_disjoint_triangles(Graph.complete(3))) == 1
    assert len(max_edge_disjoint_triangles(Graph.complete(4))) == 1
    assert len(max_edge_disjoint_triangles(Graph.empty(5))) == 0
    f1 = base_graph("F1").graph
    pk = max_edge_disjoint_triangles(f1)
    assert len(pk) >= 4 and len(pk) == naive_packing_number(f1.n, edge_set(f1))
    assert len(max_edge_disjoint_triangles(Graph.complete_multipartite([3, 3, 3]))) == 9


def test_budget():
    g = Graph.complete_multipartite([6, 6, 6])  # 216 triangles
    with pytest.raises(PackingBudgetExceeded):
        max_edge_disjoint_triangles(g)
    assert issubclass(PackingBudgetExceeded, UnsupportedSizeError)
    assert len(max_edge_disjoint_triangles(g, budget=300)) == 36


@given(graphs(max_n=8))
def test_solver_matches_oracles(g):
    if triangle_count(g) > 20:
        return
    pk = max_edge_disjoint_triangles(g)
    assert is_valid_packing(g, pk.triples)
    assert len(pk) == naive_packing_number(g.n, edge_set(g)) == naive_max_packing(g)


@pytest.mark.parametrize("gid", list(BaseGraphId))
def test_solver_on_base_graphs(gid):
    g = base_graph(gid).graph
    assert len(max_edge_disjoint_triangles(g)) == naive_packing_number(g.n, edge_set(g))


def test_is_valid_packing_rejects():
    g = Graph.complete(4)
    assert not is_valid_packing(g, [(0, 1, 2), (0, 1, 3)])
    assert not is_valid_packing(Graph.from_edges(3, [(0, 1), (1, 2)]), [(0, 1, 2)])
    assert is_valid_packing(g, [(0, 1, 2)])


def test_deterministic():
    g = blow_up(BlowUpSpec("F2", (1, 2, 1))).graph
    assert max_edge_disjoint_triangles(g) == max_edge_disjoint_triangles(g)


def test_check_examples():
    e = base_graph("F1")
    r = check_huang_shi(e.graph, e.partition)
    assert r.holds and r.rhs == 11
    r = check_conjecture_te(e.graph, e.partition)
    assert r.holds and r.rhs == 4
    e2 = base_graph("F2")
    assert check_conjecture_te(e2.graph, e2.partition).rhs == 5
    k = Graph.complete_multipartite([2, 2, 2])
    r = check_theorem11(k)
    assert r.rhs == 3 and r.holds
    bip = Graph.complete_multipartite([3, 4])
    assert check_theorem11(bip).holds and check_theorem11(bip).rhs <= 0
    k3 = Graph.complete_multipartite([3, 3, 3])
    r = check_huang_shi(k3, greedy_partition(k3))
    assert r.holds and r.witness["t_e"] == 9
    tf = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert check_huang_shi(tf, greedy_partition(tf)).holds


def test_packing_certificate_json():
    e = base_graph("F4")
    pk = max_edge_disjoint_triangles(e.graph)
    doc = json.loads(pk.to_json(e.graph))
    assert is_valid_packing(e.graph, [tuple(t) for t in doc["triples"]])
    assert doc["graph6"]


@given(k4free_strategy(max_n=9))
def test_packing_checks_hold(g):
    p = greedy_partition(g)
    pk = max_edge_disjoint_triangles(g)
    assert check_huang_shi(g, p, pk).holds
    assert check_theorem11(g, pk).holds
    assert check_packing_theorem_bound(g, p, pk).holds


@pytest.mark.parametrize("n", range(1, 6))
def test_theorem11_exhaustive_small(n):
    for g in k4free_graphs(n):
        assert check_theorem11(g).holds


def test_atlas_entries_do_not_violate_te_bound():
    for gid in BaseGraphId:
        for k in product((1, 2), repeat=3):
            e = blow_up(BlowUpSpec(gid, k))
            pk = max_edge_disjoint_triangles(e.graph)
            assert check_conjecture_te(e.graph, e.partition, pk).holds
            assert check_packing_theorem_bound(e.graph, e.partition, pk).holds
