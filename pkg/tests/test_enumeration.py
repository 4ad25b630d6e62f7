import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k4tri.atlas import base_graph
from k4tri.enumeration import (
    BASE_CASES,
    SEED_CLASS_COUNTS,
    TABLE1_CONSTANTS,
    BaseCaseSpec,
    _Layout,
    _Scorer,
    check_a0_cases,
    enumerate_base_case,
    k4free_graphs,
    random_k4free,
    rescore,
    run_base_case,
    table1_matches,
)
from k4tri.errors import K4TriError
from k4tri.graph import canonical_form, encode_graph6, has_clique, induced_subgraph, is_kk_free, parse_graph6
from k4tri.partition import partition_stats, verify_greedy

SMALL_CASES = [(2, 0, 1), (1, 2, 0), (1, 1, 1), (1, 0, 2)]


@pytest.fixture(scope="module")
def results():
    return {c: run_base_case(c) for c in BASE_CASES}


def test_constants():
    for case, const in TABLE1_CONSTANTS.items():
        assert BaseCaseSpec(*case).constant == const
    with pytest.raises(K4TriError):
        BaseCaseSpec(2, 2, 0)
    with pytest.raises(K4TriError):
        run_base_case((0, 3, 0))


def test_seed_class_counts():
    for case in BASE_CASES:
        lay = _Layout(BaseCaseSpec(*case))
        i, j = lay.slots[0]
        sizes = (lay.sizes[i], lay.sizes[j])
        assert len(lay.seed_masks("classes")) == SEED_CLASS_COUNTS[sizes]


def test_seed_classes_are_distinct_orbits():
    # representatives are pairwise non-isomorphic as two-clique graphs,
    # and together they reach every valid cross-edge set of the pair
    lay = _Layout(BaseCaseSpec(3, 0, 0))
    i, j = lay.slots[0]
    verts = lay.parts[i] + lay.parts[j]

    def pair_form(mask):
        g = lay.graph((mask, 0, 0))
        return canonical_form(induced_subgraph(g, verts))

    reps = lay.seed_masks("classes")
    assert len({pair_form(m) for m in reps}) == len(reps)
    assert {pair_form(m) for m in lay.seed_masks("naive")} == {pair_form(m) for m in reps}


def _block_rows(case, include_empty, blocks):
    lay = _Layout(BaseCaseSpec(*case))
    sc = _Scorer(lay, include_empty)
    for s0, s1 in blocks:
        b = sc.block(s0, s1)
        yield lay, sc, s0, s1, b


def _check_block(lay, sc, s0, s1, b, include_empty):
    p = lay.partition()
    nbits = len(lay.slot_edges[2])
    valid = []
    for s2 in range(1 << nbits):
        g = lay.graph((s0, s1, s2))
        if not has_clique(g, 4) and verify_greedy(g, p):
            if include_empty or (s1 and s2):
                valid.append(s2)
    got = [] if b is None else [int(x) for x in b["s2"]]
    assert got == valid
    if b is None:
        return
    for pos, s2 in enumerate(got):
        g = lay.graph((s0, s1, s2))
        s = partition_stats(g, p)
        for key in ("e", "t", "m2", "m3", "m0", "f0", "omega"):
            assert int(b[key][pos]) == getattr(s, key), key
        for slot, (i, j) in enumerate(lay.slots):
            assert int(b["e_pairs"][slot][pos]) == s.e_pair[(min(i, j), max(i, j))]
            assert int(b["t_pairs"][slot][pos]) == s.t_pair[(min(i, j), max(i, j))]
    checks = sc.checks(b)
    for pos, s2 in enumerate(got):
        g = lay.graph((s0, s1, s2))
        s = partition_stats(g, p)
        assert bool(checks["ineq8"][pos]) == (s.t >= s.m2 + s.e - 3 * (s.n - 3))
        assert bool(checks["main-theorem"][pos]) == (s.t >= 3 * (s.e - 3 * (s.n - 3)) - s.omega)


@pytest.mark.parametrize("case", SMALL_CASES)
@pytest.mark.parametrize("include_empty", [True, False])
def test_scorer_matches_scalar_stats_small(case, include_empty):
    lay = _Layout(BaseCaseSpec(*case))
    blocks = [(s0, s1) for s0 in lay.seed_masks("naive") for s1 in range(1 << len(lay.slot_edges[1]))]
    rng = random.Random(hash(case) & 0xFFFF)
    for lay, sc, s0, s1, b in _block_rows(case, include_empty, rng.sample(blocks, min(40, len(blocks)))):
        _check_block(lay, sc, s0, s1, b, include_empty)


@pytest.mark.parametrize("case", [(3, 0, 0), (2, 1, 0)])
def test_scorer_matches_scalar_stats_sampled(case):
    lay = _Layout(BaseCaseSpec(*case))
    rng = random.Random(7)
    seeds = lay.seed_masks("classes")
    blocks = [(rng.choice(seeds), rng.randrange(1 << len(lay.slot_edges[1]))) for _ in range(6)]
    for lay_, sc, s0, s1, b in _block_rows(case, True, blocks):
        _check_block(lay_, sc, s0, s1, b, True)


def test_table1(results):
    assert table1_matches(list(results.values())) == []
    assert {r.matched for r in results[(3, 0, 0)].records} == {"F1", "F2", "F3"}
    assert [r.matched for r in results[(2, 1, 0)].records] == ["F4"]
    for case in SMALL_CASES:
        assert results[case].records == []


def test_records_rescore(results):
    for res in results.values():
        for rec in res.records:
            assert rescore(rec) == rec.params()
            g = parse_graph6(rec.graph6)
            assert canonical_form(g).hex() == rec.canonical
            assert rec.t < rec.m2 + rec.e - BaseCaseSpec(*rec.case).constant


def test_other_checks_never_fail(results):
    for res in results.values():
        assert all(v == 0 for k, v in res.violations.items() if k != "ineq8")
        assert res.omega_values <= {0, 1}


def test_violators_match_atlas(results):
    forms = {canonical_form(base_graph(x).graph).hex(): x for x in ("F1", "F2", "F3", "F4")}
    got = {r.canonical: r.matched for res in results.values() for r in res.records}
    assert got == forms


def test_original_coverage_gives_same_classes(results):
    for case in BASE_CASES:
        res = run_base_case(case, include_empty_subsets=False)
        assert res.canonical_set() == results[case].canonical_set()
        assert res.visited < results[case].visited


@pytest.mark.parametrize("case", SMALL_CASES + [(2, 1, 0)])
def test_naive_strategy_agrees(case, results):
    naive = run_base_case(case, strategy="naive")
    assert naive.canonical_set() == results[case].canonical_set()
    assert naive.violations["ineq8"] >= results[case].violations["ineq8"]


@pytest.mark.slow
def test_naive_strategy_agrees_largest(results):
    naive = run_base_case((3, 0, 0), strategy="naive")
    assert naive.canonical_set() == results[(3, 0, 0)].canonical_set()


def test_parallel_matches_serial(results):
    par = run_base_case((2, 1, 0), jobs=2)
    ser = results[(2, 1, 0)]
    assert par.visited == ser.visited and par.violations == ser.violations
    assert [r.to_dict() for r in par.records] == [r.to_dict() for r in ser.records]


def test_enumerate_base_case_returns_records():
    recs = enumerate_base_case((2, 1, 0))
    assert [r.params() for r in recs] == [(10, 8, 18)]


def test_a0_cases():
    rep = check_a0_cases()
    assert rep.holds
    assert rep.witness["max_e_minus_3n_plus_9"] <= 0


# -- random instances ---------------------------------------------------------


def test_random_k4free_examples():
    assert random_k4free(1, 0.5, 3).n == 1
    assert random_k4free(9, 1.0, 42) == random_k4free(9, 1.0, 42)
    for s in range(1, 101):
        assert is_kk_free(random_k4free(12, 1.0, s), 4)
    with pytest.raises(K4TriError):
        random_k4free(0, 1.0, 1)


def test_random_k4free_is_maximal_at_full_density():
    g = random_k4free(10, 1.0, 5)
    for u in range(10):
        for v in range(u + 1, 10):
            if not g.has_edge(u, v):
                assert has_clique(g.add_edges([(u, v)]), 4)


def test_random_k4free_regression():
    # recorded output; a change here means the stream layout changed
    assert encode_graph6(random_k4free(8, 1.0, 2024)) == "Gvzbzw"


@given(st.integers(1, 14), st.sampled_from([0.3, 0.7, 1.0]), st.integers(0, 2**64 - 1))
def test_random_k4free_property(n, density, seed):
    g = random_k4free(n, density, seed)
    assert g.n == n and is_kk_free(g, 4)
    assert g == random_k4free(n, density, seed)


def test_k4free_graphs_count():
    # labelled K4-free graphs on 4 vertices: all 64 except K4 itself
    assert sum(1 for _ in k4free_graphs(4)) == 63
