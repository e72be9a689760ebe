import math
import random

import pytest

from conftest import make
from mrcut.flow import connectivity, verify_cut
from mrcut.generate import GenConfig, suite
from mrcut.graph import Graph, Removal, Semantics, effective_thresholds
from mrcut.lp import solve_lp
from mrcut.oracle import brute_force_opt
from mrcut.pipeline import solve
from mrcut.rounding import (
    CutSolution,
    InfeasibleError,
    choose_radius,
    keep_rule,
    prune_cut,
    region_sweep,
    round_exact,
)

STAR = Graph(4, ((0, 1), (0, 2), (0, 3)))


def test_star_sweep():
    sweep = region_sweep(STAR, [0.3] * 3, [1.0] * 3, 0, radius_cap=0.5, seed_volume=0.1)
    assert sweep.breakpoints == pytest.approx([0.0, 0.3])
    below = sweep.at(0.29)
    assert below.region == {0}
    assert below.boundary == (0, 1, 2)
    assert below.boundary_cost == 3
    assert below.volume == pytest.approx(0.1 + 3 * 0.29)
    at = sweep.at(0.3)
    assert at.region == {0, 1, 2, 3} and at.boundary == ()
    assert at.volume == pytest.approx(0.1 + 3 * 0.3)
    assert [p.radius for p in sweep.points] == pytest.approx([0.0, 0.3])


def test_star_radius_is_first_empty_boundary():
    sweep = region_sweep(STAR, [0.3] * 3, [1.0] * 3, 0, radius_cap=0.5, seed_volume=0.1)
    # 3 <= 4 ln 2 (0.1 + 3r) fails at r = 0 and r = 0.15; at 0.3 the boundary is empty
    assert choose_radius(sweep, 1) == pytest.approx(0.3)


def test_extended_star_radius_matches_inequality():
    # spokes 0-i of length 0.3 continue with edges i-(i+3) of length 0.3
    g = Graph(7, ((0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)))
    sweep = region_sweep(g, [0.3] * 6, [1.0] * 6, 0, radius_cap=0.5, seed_volume=0.1)
    factor = 4 * math.log(2)
    # past r = 0.3 the boundary is the three outer edges and V = 1.0 + 3 (r - 0.3)
    root = 0.3 + (3 / factor - 1.0) / 3
    assert root == pytest.approx(0.32734, abs=1e-5)
    grid = sweep.grid()
    expected = min(r for r in grid if r >= root)
    assert expected == pytest.approx(0.4)
    assert choose_radius(sweep, 1) == pytest.approx(expected)
    point = sweep.at(0.4)
    assert point.boundary == (3, 4, 5)
    assert point.volume == pytest.approx(1.3)


def test_zero_metric_collapses():
    g = Graph(4, ((0, 1), (1, 2), (2, 3)))
    sweep = region_sweep(g, [0.0] * 3, [1.0] * 3, 0, seed_volume=1.0)
    assert sweep.breakpoints == [0.0]
    point = sweep.at(0.1)
    assert point.region == {0, 1, 2, 3} and point.boundary == ()


def test_exclusion_at_root_distance():
    g = Graph(3, ((0, 1), (1, 2)))
    sweep = region_sweep(g, [0.0, 0.4], [1.0, 1.0], 0, seed_volume=1.0)
    assert choose_radius(sweep, 1, {1}) is None


def test_sweep_rejects_bad_args():
    with pytest.raises(ValueError):
        region_sweep(STAR, [0.1] * 3, [1] * 3, 9)
    with pytest.raises(ValueError):
        region_sweep(STAR, [0.1] * 3, [1] * 3, 0, seed_volume=0)


def test_regions_are_nested():
    rng = random.Random(8)
    for _ in range(60):
        n = rng.randint(3, 9)
        g = Graph(n, tuple(tuple(rng.sample(range(n), 2)) for _ in range(rng.randint(2, 14))))
        x = [rng.random() * 0.4 for _ in range(g.m)]
        sweep = region_sweep(g, x, [1.0] * g.m, 0, seed_volume=0.5)
        points = [sweep.at(r) for r in sweep.grid()]
        for a, b in zip(points, points[1:]):
            assert a.region <= b.region
            assert a.volume <= b.volume + 1e-12
        for p in points:
            inside = p.region
            assert set(p.boundary) == {e for e in g.active_edges() if len(inside & set(g.edges[e])) == 1}


def test_keep_rule_prefers_expensive_then_low_id():
    inst = make(3, [(0, 1), (0, 1), (0, 1), (0, 1)], [2, 5, 2, 1], [(0, 1, 3)])
    kept, removed = keep_rule(inst, [0, 1, 2, 3], 2)
    assert kept == [1, 0]
    assert removed == [2, 3]


# -- rounding ------------------------------------------------------------


def test_round_triangle(triangle):
    frac, _, _ = solve_lp(triangle)
    cut = round_exact(triangle, frac.x, lp_objective=frac.objective)
    assert cut.cost == 1
    assert cut.removed in ((1,), (2,))
    assert connectivity(triangle.apply(cut.removed), 0, 1, Semantics.EDGE_DISJOINT) == 1


def test_round_four_cycle():
    inst = make(4, [(0, 1), (1, 2), (2, 3), (3, 0)], demands=[(0, 2, 2)])
    frac, _, _ = solve_lp(inst)
    cut = round_exact(inst, frac.x, lp_objective=frac.objective)
    assert cut.cost == 1 == brute_force_opt(inst).cost


def test_round_multicut_cuts_whole_boundary():
    # k = 1: nothing may be kept
    inst = make(4, [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)], [1, 4, 1, 3, 2], [(0, 3, 1)])
    frac, _, _ = solve_lp(inst)
    cut = round_exact(inst, frac.x, lp_objective=frac.objective)
    assert verify_cut(inst, cut.removed).feasible
    assert all(step.get("kind") in ("region", "fallback") for step in cut.trace)
    assert cut.cost >= brute_force_opt(inst).cost


def test_round_requires_edge_instance():
    inst = make(3, [(0, 1), (1, 2)], [1, 1, 1], [(0, 2, 1)], removal=Removal.VERTEX)
    with pytest.raises(ValueError):
        round_exact(inst, [0.0, 0.0])


def test_infeasible_split_instance():
    from mrcut.graph import vertex_split_transform

    inst = make(3, [(0, 1), (1, 2), (0, 2)], [1, 1, 1], [(0, 2, 1)], removal=Removal.VERTEX)
    split, _ = vertex_split_transform(inst)
    frac, _, _ = solve_lp(split)
    with pytest.raises(InfeasibleError) as info:
        round_exact(split, frac.x)
    assert info.value.demand == 0


def test_prune_triangle(triangle):
    cut = CutSolution((1, 2), 2, "exact", 1.0, (2,))
    pruned = prune_cut(triangle, cut)
    assert len(pruned.removed) == 1 and pruned.cost == 1
    assert prune_cut(triangle, pruned).removed == pruned.removed


def test_prune_rejects_infeasible(triangle):
    with pytest.raises(ValueError):
        prune_cut(triangle, CutSolution((), 0, "exact", 1.0, (2,)))


def _suite():
    out = []
    out += suite(GenConfig(model="gnp", n=7, p=0.5, demands=2, k_min=1, k_max=3), 25, 10)
    out += suite(GenConfig(model="multi", n=6, m=11, demands=2, k_min=1, k_max=3), 20, 20)
    out += suite(GenConfig(model="grid", rows=3, cols=3, demands=2, k_min=2, k_max=2), 5, 30)
    out += suite(
        GenConfig(model="gnp", n=7, p=0.55, demands=2, k_min=1, k_max=2, semantics=Semantics.VERTEX_DISJOINT), 15, 40
    )
    return out


@pytest.fixture(scope="module")
def rounded():
    out = []
    for inst in _suite():
        frac, _, _ = solve_lp(inst)
        cuts = {beta: round_exact(inst, frac.x, beta, frac.objective) for beta in (1.0, 1.5, 2.0)}
        out.append((inst, frac, cuts))
    return out


def test_outputs_verify_at_relaxed_thresholds(rounded):
    for inst, frac, cuts in rounded:
        for beta, cut in cuts.items():
            assert verify_cut(inst, cut.removed, effective_thresholds(inst, beta)).feasible


def test_sandwich(rounded):
    for inst, frac, cuts in rounded:
        if len(inst.removable()) > 14:
            continue
        opt = brute_force_opt(inst)
        assert frac.objective <= opt.cost + 1e-6
        assert opt.cost <= cuts[1.0].cost


def test_monotone_tradeoff(rounded):
    for inst, frac, cuts in rounded:
        assert cuts[2.0].cost <= cuts[1.5].cost <= cuts[1.0].cost


def test_pruned_cuts_are_minimal(rounded):
    for inst, frac, cuts in rounded:
        for cut in cuts.values():
            for e in cut.removed:
                smaller = [f for f in cut.removed if f != e]
                assert not verify_cut(inst, smaller, cut.thresholds).feasible


def test_iterations_bounded(rounded):
    for inst, frac, cuts in rounded:
        lam = sum(connectivity(inst.graph, d.u, d.v, inst.semantics) for d in inst.demands)
        for cut in cuts.values():
            assert len(cut.trace) <= max(lam, 1)


def test_rounding_is_deterministic():
    for inst in _suite()[:8]:
        frac, _, _ = solve_lp(inst)
        a = round_exact(inst, frac.x, 1.0, frac.objective)
        b = round_exact(inst, frac.x, 1.0, frac.objective)
        assert a.removed == b.removed and a.trace == b.trace


def test_vertex_removal_pipeline():
    for inst in suite(
        GenConfig(model="gnp", n=7, p=0.5, demands=2, k_min=1, k_max=2, removal=Removal.VERTEX), 15, 50
    ):
        try:
            result = solve(inst)
        except InfeasibleError:
            assert not brute_force_opt(inst).feasible
            continue
        assert result.verification.feasible
        assert result.verification.cost >= brute_force_opt(inst).cost


def test_relaxation_ladder():
    from mrcut.rounding import relaxation_ladder

    inst = make(4, [(0, 1), (1, 2), (2, 3)], demands=[(0, 3, 4), (0, 2, 2)])
    assert relaxation_ladder(inst, 1.0) == [1.0]
    assert relaxation_ladder(inst, 1.5) == [1.0, 1.25, 1.5]
    assert relaxation_ladder(inst, 1.6) == [1.0, 1.25, 1.5, 1.6]
    # each rung carries a distinct threshold vector and gaps inherit the right end
    ladder = relaxation_ladder(inst, 2.0)
    vectors = [tuple(effective_thresholds(inst, b)) for b in ladder]
    assert len(set(vectors)) == len(vectors)
    assert effective_thresholds(inst, 1.3) == effective_thresholds(inst, 1.5)


def test_monotone_over_fine_beta_grid():
    cfg = GenConfig(model="gnp", n=8, p=0.7, demands=2, k_min=2, k_max=4)
    for inst in suite(cfg, 20, 700):
        frac, _, _ = solve_lp(inst)
        costs = [round_exact(inst, frac.x, 1 + i / 8, frac.objective).cost for i in range(9)]
        assert all(b <= a for a, b in zip(costs, costs[1:])), costs

