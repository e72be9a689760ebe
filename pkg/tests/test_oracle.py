import itertools
import random

import networkx as nx
import pytest

from conftest import complete, make, random_multigraph
from mrcut.flow import verify_cut
from mrcut.graph import Graph, Semantics
from mrcut.oracle import TooLarge, brute_force_opt, enumerate_disjoint_path_sets, simple_paths


def test_triangle_two_routes(triangle):
    res = brute_force_opt(triangle)
    assert res.feasible and res.cost == 1
    assert res.removed in ((1,), (2,))
    assert res.optimal_count == 2


def test_triangle_one_route():
    inst = make(3, [(0, 1), (0, 2), (2, 1)], [3, 1, 1], [(0, 1, 1)])
    res = brute_force_opt(inst)
    assert res.cost == 4 and res.optimal_count == 2
    assert set(res.removed) >= {0}


def test_no_demands():
    inst = make(3, [(0, 1), (1, 2)], [4, 4])
    res = brute_force_opt(inst)
    assert res.cost == 0 and res.removed == () and res.optimal_count == 1


def test_size_cap():
    inst = make(6, [(a, b) for a, b in itertools.combinations(range(6), 2)], demands=[(0, 1, 1)])
    with pytest.raises(TooLarge):
        brute_force_opt(inst, size_cap=12)


def test_custom_thresholds(triangle):
    assert brute_force_opt(triangle, thresholds=[3]).cost == 0
    assert brute_force_opt(triangle, thresholds=[1]).cost == 4


def test_result_matches_exhaustive_scan():
    # the best-first search agrees with a flat scan over every subset
    rng = random.Random(31)
    for _ in range(40):
        n = rng.randint(3, 6)
        g = random_multigraph(rng, n, rng.randint(2, 8))
        u, v = rng.sample(range(n), 2)
        costs = [rng.randint(0, 5) for _ in range(g.m)]
        inst = make(n, g.edges, costs, [(u, v, rng.randint(1, 2))])
        res = brute_force_opt(inst)
        feasible = [
            sum(costs[e] for e in s)
            for r in range(g.m + 1)
            for s in itertools.combinations(range(g.m), r)
            if verify_cut(inst, s).feasible
        ]
        best = min(feasible)
        assert res.cost == best
        assert res.optimal_count == feasible.count(best)


def test_enumeration_triangle():
    g = complete(3)
    sets = enumerate_disjoint_path_sets(g, 0, 1, 2).sets
    assert len(sets) == 1
    assert sorted(sets[0].paths) == [(0, 1), (0, 2, 1)]


def test_enumeration_path_has_no_two_routes():
    g = Graph(3, ((0, 1), (1, 2)))
    assert enumerate_disjoint_path_sets(g, 0, 2, 2).sets == []


def test_enumeration_k4():
    # simple 0-1 paths: 01, 021, 031, 0231, 0321; five disjoint pairs
    sets = enumerate_disjoint_path_sets(complete(4), 0, 1, 2).sets
    assert len(sets) == 5


def _nx_disjoint_sets(g, u, v, k, semantics):
    multi = nx.MultiGraph()
    multi.add_nodes_from(range(g.n))
    for e, (a, b) in enumerate(g.edges):
        multi.add_edge(a, b, key=e)
    paths = []
    for p in nx.all_simple_edge_paths(multi, u, v):
        eids = frozenset(key for _, _, key in p)
        inner = frozenset(a for a, _, _ in p[1:])
        paths.append((eids, inner))
    count = 0
    for combo in itertools.combinations(paths, k):
        edges_ok = sum(len(e) for e, _ in combo) == len(frozenset().union(*(e for e, _ in combo)))
        inner_ok = sum(len(i) for _, i in combo) == len(frozenset().union(*(i for _, i in combo)))
        if edges_ok and (semantics is Semantics.EDGE_DISJOINT or inner_ok):
            count += 1
    return len(paths), count


@pytest.mark.parametrize("semantics", list(Semantics))
def test_enumeration_matches_networkx(semantics):
    rng = random.Random(5)
    for _ in range(80):
        n = rng.randint(2, 6)
        g = random_multigraph(rng, n, rng.randint(1, 8))
        u, v = rng.sample(range(n), 2)
        for k in (1, 2, 3):
            n_paths, count = _nx_disjoint_sets(g, u, v, k, semantics)
            assert len(simple_paths(g, u, v)) == n_paths
            assert len(enumerate_disjoint_path_sets(g, u, v, k, semantics).sets) == count


def test_enumeration_limit_marks_partial():
    res = enumerate_disjoint_path_sets(complete(6), 0, 1, 2, limit=3)
    assert res.partial and len(res.sets) == 3
