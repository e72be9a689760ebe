import random

import numpy as np
import pytest

from conftest import make, random_multigraph
from mrcut.flow import connectivity
from mrcut.generate import GenConfig, suite
from mrcut.graph import Demand, Instance, Removal, Semantics
from mrcut.lp import (
    CutConstraint,
    Tolerances,
    live_demands,
    separate,
    solve_lp,
    solve_restricted_master,
)
from mrcut.oracle import brute_force_opt, min_union_length


def test_separate_zero_metric(triangle):
    row = separate(triangle, [0.0, 0.0, 0.0], 0)
    assert row.edges == {0, 1, 2}
    assert row.violation == pytest.approx(1.0)


def test_separate_satisfied(triangle):
    # cheapest union st + sa + at has length 0 + 1 + 0 = 1
    assert separate(triangle, [0.0, 1.0, 0.0], 0) is None


def test_separate_vacuous_demand():
    inst = make(3, [(0, 1), (1, 2)], demands=[(0, 2, 2)])
    assert separate(inst, [0.0, 0.0], 0) is None
    assert live_demands(inst) == ([], [0])


def test_restricted_master_examples():
    one = solve_restricted_master([CutConstraint(0, frozenset({0, 1}))], [1.0, 2.0])
    assert one.x == pytest.approx([1.0, 0.0])
    assert one.objective == pytest.approx(1.0)

    single = solve_restricted_master([CutConstraint(0, frozenset({0}))], [4.0])
    assert single.objective == pytest.approx(4.0)

    rows = [CutConstraint(0, frozenset({0, 1})), CutConstraint(0, frozenset({1, 2}))]
    two = solve_restricted_master(rows, [1.0, 1.0, 1.0])
    assert two.objective == pytest.approx(1.0)
    assert two.x == pytest.approx([0.0, 1.0, 0.0])
    # complementary slackness: duals sum to the objective (both rows tight)
    assert two.duals.sum() == pytest.approx(1.0)


def test_restricted_master_empty():
    res = solve_restricted_master([], [1.0, 2.0])
    assert res.objective == 0 and not res.x.any()


def test_solve_lp_triangle(triangle):
    frac, report, rows = solve_lp(triangle)
    assert frac.objective == pytest.approx(1.0, abs=1e-9)
    assert report.status == "optimal"
    assert all(s >= -1e-6 for s in report.slacks)
    assert all(0 <= x <= 1 for x in frac.x)


def test_solve_lp_single_edge():
    inst = make(2, [(0, 1)], [5], [(0, 1, 1)])
    frac, report, _ = solve_lp(inst)
    assert frac.x == pytest.approx((1.0,))
    assert frac.objective == pytest.approx(5.0)


def test_solve_lp_rejects_vertex_instances():
    inst = make(3, [(0, 1), (1, 2)], [1, 1, 1], [(0, 2, 1)], removal=Removal.VERTEX)
    with pytest.raises(ValueError):
        solve_lp(inst)


def test_row_cap_reports_nonconvergence():
    inst = suite(GenConfig(model="gnp", n=8, p=0.6, demands=3, k_min=1, k_max=3), 1, 5)[0]
    frac, report, rows = solve_lp(inst, Tolerances(row_cap=1))
    assert report.status == "nonconverged"
    assert len(rows) <= 1


def _small_suite():
    out = []
    out += suite(GenConfig(model="multi", n=6, m=10, demands=2, k_min=1, k_max=3), 25, 100)
    out += suite(GenConfig(model="gnp", n=6, p=0.6, demands=2, k_min=1, k_max=3), 15, 200)
    out += suite(
        GenConfig(model="gnp", n=6, p=0.6, demands=2, k_min=1, k_max=2, semantics=Semantics.VERTEX_DISJOINT),
        15,
        300,
    )
    return [inst for inst in out if inst.graph.m <= 12]


@pytest.fixture(scope="module")
def solved():
    return [(inst, *solve_lp(inst)) for inst in _small_suite()]


def test_lower_bound_property(solved):
    for inst, frac, report, rows in solved:
        opt = brute_force_opt(inst)
        assert frac.objective <= opt.cost + 1e-6


def test_rows_are_sound(solved):
    # every pooled row is hit by every optimal integral cut
    for inst, frac, report, rows in solved:
        opt = brute_force_opt(inst)
        for row in rows:
            assert row.edges & set(opt.removed)


def test_objective_history_is_monotone(solved):
    for inst, frac, report, rows in solved:
        assert all(b >= a - 1e-9 for a, b in zip(report.history, report.history[1:]))


def test_final_x_is_certified(solved):
    for inst, frac, report, rows in solved:
        assert report.status == "optimal"
        x = np.array(frac.x)
        assert (x >= -1e-9).all() and (x <= 1 + 1e-9).all()
        for row in rows:
            assert x[list(row.edges)].sum() >= 1 - 1e-7
        for i, d in enumerate(inst.demands):
            if i in report.vacuous:
                continue
            best = min_union_length(inst.graph, d.u, d.v, d.k, frac.x, inst.semantics)
            assert best >= 1 - 1e-6


def test_solve_lp_is_deterministic():
    for inst in _small_suite()[:10]:
        a = solve_lp(inst)
        b = solve_lp(inst)
        assert a[0] == b[0]
        assert [r.edges for r in a[2]] == [r.edges for r in b[2]]


def test_separation_completeness():
    rng = random.Random(23)
    for _ in range(150):
        g = random_multigraph(rng, rng.randint(2, 6), rng.randint(1, 8))
        u, v = rng.sample(range(g.n), 2)
        semantics = rng.choice(list(Semantics))
        lam = connectivity(g, u, v, semantics)
        k = rng.randint(1, max(1, lam))
        inst = Instance(g, tuple([1] * g.m), (Demand(u, v, k),), semantics=semantics)
        x = [rng.uniform(0, 0.6) for _ in range(g.m)]
        row = separate(inst, x, 0)
        best = min_union_length(g, u, v, k, x, semantics)
        if best is None or best >= 1 - 1e-6:
            assert row is None
        else:
            assert row is not None
            assert row.violation == pytest.approx(1 - best, abs=1e-9)
