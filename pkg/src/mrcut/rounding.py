"""Region-growing rounding of the fractional cut.

One demand at a time, grow a ball around its first endpoint in the metric
``x`` until the ball's boundary cost is paid for by the fractional volume
inside it, then cut the boundary except for its ``k' - 1`` most expensive
edges.  At most ``k' - 1`` disjoint paths can leave the ball afterwards, so
the demand drops strictly below ``k'``.  When no radius qualifies before the
other endpoint enters the ball, a cost-weighted minimum cut is used instead,
under the same keep rule.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .flow import connectivity, is_feasible, max_flow
from .graph import Graph, Instance, Number, Removal, Semantics, effective_thresholds

RADIUS_CAP = 0.5
_MIN_SEED = 1e-12


class InfeasibleError(RuntimeError):
    """No removable set can bring the named demand below its threshold."""

    def __init__(self, demand: int, message: str):
        self.demand = demand
        super().__init__(message)


def shortest_distances(graph: Graph, lengths: Sequence[float], root: int) -> list[float]:
    dist = [math.inf] * graph.n
    dist[root] = 0.0
    adj = graph.incidence()
    heap = [(0.0, root)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        for e, y in adj[x]:
            nd = d + max(0.0, lengths[e])
            if nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


@dataclass(frozen=True)
class SweepPoint:
    radius: float
    region: frozenset[int]
    boundary: tuple[int, ...]
    boundary_cost: float
    volume: float

    @property
    def ratio(self) -> float:
        return self.boundary_cost / self.volume


@dataclass
class RegionSweep:
    """Ball statistics around ``root`` in the metric ``x``.

    ``points`` holds one entry per breakpoint (distinct distance below the
    radius cap); :meth:`at` evaluates any radius.
    """

    graph: Graph
    x: Sequence[float]
    costs: Sequence[float]
    root: int
    radius_cap: float
    seed_volume: float
    dist: list[float]
    breakpoints: list[float]
    points: list[SweepPoint] = field(default_factory=list)

    def at(self, r: float) -> SweepPoint:
        g, dist = self.graph, self.dist
        region = frozenset(w for w in range(g.n) if dist[w] <= r)
        boundary = []
        volume = self.seed_volume
        for e in g.active_edges():
            a, b = g.edges[e]
            ina, inb = a in region, b in region
            if ina and inb:
                volume += self.costs[e] * self.x[e]
            elif ina or (inb and not g.directed):
                near = a if ina else b
                boundary.append(e)
                volume += self.costs[e] * (r - dist[near])
        cost = float(sum(self.costs[e] for e in boundary))
        return SweepPoint(r, region, tuple(boundary), cost, volume)

    def grid(self) -> list[float]:
        """Breakpoints plus the midpoints of every gap, the last gap ending at the cap."""
        out = []
        ends = self.breakpoints + [self.radius_cap]
        for i, b in enumerate(self.breakpoints):
            out.append(b)
            out.append((b + ends[i + 1]) / 2)
        return out


def region_sweep(
    graph: Graph,
    x: Sequence[float],
    costs: Sequence[float],
    root: int,
    radius_cap: float = RADIUS_CAP,
    seed_volume: float = 1.0,
) -> RegionSweep:
    if not 0 <= root < graph.n:
        raise ValueError(f"invalid root {root}")
    if radius_cap <= 0 or seed_volume <= 0:
        raise ValueError("radius cap and seed volume must be positive")
    dist = shortest_distances(graph, x, root)
    breakpoints = sorted({d for d in dist if d < radius_cap})
    sweep = RegionSweep(graph, x, costs, root, radius_cap, seed_volume, dist, breakpoints)
    sweep.points = [sweep.at(b) for b in breakpoints]
    return sweep


def choose_radius(sweep: RegionSweep, pairs: int, exclusion: Iterable[int] = ()) -> float | None:
    """Smallest grid radius whose boundary cost is covered by the ball volume.

    The test is ``c(boundary) <= (2 / R) * ln(pairs + 1) * V(r)``.  Returns
    ``None`` if an excluded vertex enters the ball first.
    """
    excluded = set(exclusion)
    factor = 2.0 / sweep.radius_cap * math.log(pairs + 1)
    for r in sweep.grid():
        point = sweep.at(r)
        if excluded & point.region:
            return None
        if point.boundary_cost <= factor * point.volume * (1 + 1e-12):
            return r
    return None


def keep_rule(instance: Instance, edges: Iterable[int], budget: int) -> tuple[list[int], list[int]]:
    """Split ``edges`` into (kept, removed) keeping at most ``budget`` paths' worth.

    Fixed edges are always kept, even past the budget (callers check); the
    rest are kept most expensive first, lowest id on ties.
    """
    g = instance.graph
    edges = sorted(set(edges), key=lambda e: (-instance.costs[e], e))
    kept, removed = [], []
    used = 0
    for e in edges:
        if e in instance.fixed:
            kept.append(e)
            used += g.cap(e)
    for e in edges:
        if e in instance.fixed:
            continue
        if used + g.cap(e) <= budget:
            kept.append(e)
            used += g.cap(e)
        else:
            removed.append(e)
    return kept, removed


@dataclass
class CutSolution:
    removed: tuple[int, ...]
    cost: Number
    mode: str
    beta: float
    thresholds: tuple[int, ...]
    trace: list[dict] = field(default_factory=list)
    rung: float = 1.0  # relaxation the traced rounding ran at

    def to_dict(self) -> dict:
        return {
            "removed": list(self.removed),
            "cost": self.cost,
            "mode": self.mode,
            "beta": self.beta,
            "thresholds": list(self.thresholds),
            "rung": self.rung,
        }


def _fallback_cut(instance: Instance, graph: Graph, u: int, v: int) -> tuple[int, ...]:
    """Minimum cost-weighted ``u``-``v`` edge cut.

    Each unit of fixed capacity weighs more than every finite cost together,
    so the cut first minimizes how much fixed capacity it crosses.
    """
    finite = 1.0 + sum(float(instance.costs[e]) for e in instance.items if e not in instance.fixed)
    weights = [
        finite * graph.cap(e) if e in instance.fixed else float(instance.costs[e])
        for e in range(graph.m)
    ]
    return max_flow(graph, u, v, Semantics.EDGE_DISJOINT, weights=weights).cut_edges


def _round_at(
    instance: Instance, x: Sequence[float], thresholds: Sequence[int], lp_objective: float
) -> tuple[set[int], list[dict]]:
    costs = [float(c) for c in instance.costs]
    removed: set[int] = set()
    trace: list[dict] = []
    while True:
        g = instance.graph.without_edges(removed)
        live = [
            i
            for i, (d, t) in enumerate(zip(instance.demands, thresholds))
            if connectivity(g, d.u, d.v, instance.semantics, limit=t) >= t
        ]
        if not live:
            return removed, trace
        i = live[0]
        d, t = instance.demands[i], thresholds[i]
        seed = max(lp_objective / max(1, len(live)), _MIN_SEED)
        sweep = region_sweep(g, x, costs, d.u, RADIUS_CAP, seed)
        r = choose_radius(sweep, len(live), {d.v})
        step = {"demand": i, "root": d.u, "seed_volume": seed}
        cut = None
        if r is not None:
            point = sweep.at(r)
            kept, cut = keep_rule(instance, point.boundary, t - 1)
            if _capacity(g, kept) > t - 1:
                cut = None
            else:
                step.update(kind="region", radius=r, region_size=len(point.region))
        if cut is None:
            boundary = _fallback_cut(instance, g, d.u, d.v)
            kept, cut = keep_rule(instance, boundary, t - 1)
            if _capacity(g, kept) > t - 1:
                raise InfeasibleError(i, f"demand {i} ({d.u}, {d.v}) cannot be brought below {t}")
            step.update(kind="fallback")
        step["removed"] = sorted(cut)
        trace.append(step)
        removed.update(cut)
        after = connectivity(instance.graph.without_edges(removed), d.u, d.v, instance.semantics, limit=t)
        if after >= t:
            raise RuntimeError(f"rounding step made no progress on demand {i}")


def relaxation_ladder(instance: Instance, beta: float) -> list[float]:
    """Relaxation values in ``[1, beta]``, one per distinct threshold vector.

    Thresholds are constant on each interval between consecutive rungs and
    equal their value at the interval's right end.
    """
    if beta < 1:
        raise ValueError("beta must be at least 1")
    rungs = {1.0, float(beta)}
    for d in instance.demands:
        top = math.floor(beta * d.k + 1e-9)
        rungs.update(j / d.k for j in range(d.k + 1, top + 1))
    return sorted(r for r in rungs if r <= beta + 1e-12)


def round_exact(
    instance: Instance,
    x: Sequence[float],
    beta: float = 1.0,
    lp_objective: float | None = None,
    prune: bool = True,
) -> CutSolution:
    """Round ``x`` into a cut meeting thresholds ``ceil(beta * k)``.

    ``beta = 1`` satisfies the thresholds exactly.  For larger ``beta`` the
    rounding runs at every relaxation where a threshold changes, and each
    rung keeps the cheaper of its own cut and the previous rung's cut
    re-pruned.  Any cut valid at a tighter rung is valid at a looser one, so
    cost never increases with ``beta``.

    Raises :class:`InfeasibleError` when some demand cannot be cut without
    touching fixed items.
    """
    if instance.removal is not Removal.EDGE:
        raise ValueError("round_exact works on edge-removal instances")
    thresholds = effective_thresholds(instance, beta)
    removable = instance.removable()
    if not is_feasible(instance, removable, thresholds):
        g = instance.apply(removable)
        for i, (d, t) in enumerate(zip(instance.demands, thresholds)):
            if connectivity(g, d.u, d.v, instance.semantics, limit=t) >= t:
                raise InfeasibleError(i, f"demand {i} ({d.u}, {d.v}) cannot be brought below {t}")
    if lp_objective is None:
        lp_objective = sum(float(c) * xe for c, xe in zip(instance.costs, x))
    mode = "exact" if beta == 1 else "bicriteria"

    best: CutSolution | None = None
    seen: set[tuple[int, ...]] = set()
    for rung in relaxation_ladder(instance, beta):
        t = tuple(effective_thresholds(instance, rung))
        if t in seen or not is_feasible(instance, removable, t):
            continue
        seen.add(t)
        removed, trace = _round_at(instance, x, t, lp_objective)
        fresh = CutSolution(tuple(sorted(removed)), instance.cost_of(removed), mode, beta, t, trace, rung)
        candidates = [fresh]
        if best is not None:
            candidates.append(replace(best, thresholds=t))
        if prune:
            candidates = [prune_cut(instance, c, t) for c in candidates]
        # min keeps the first minimum, so ties go to the fresh rounding
        best = min(candidates, key=lambda c: c.cost)
    assert best is not None
    return replace(best, thresholds=tuple(thresholds), mode=mode, beta=beta)


def _capacity(graph: Graph, edges: Iterable[int]) -> int:
    return sum(graph.cap(e) for e in edges)


def prune_cut(instance: Instance, cut: CutSolution, thresholds: Sequence[int] | None = None) -> CutSolution:
    """Reverse delete: give back removed items, priciest first, while feasibility holds."""
    if thresholds is None:
        thresholds = cut.thresholds
    current = set(cut.removed)
    if not is_feasible(instance, current, thresholds):
        raise ValueError("prune_cut needs a feasible cut")
    for item in sorted(current, key=lambda e: (-instance.costs[e], -e)):
        trial = current - {item}
        if is_feasible(instance, trial, thresholds):
            current = trial
    removed = tuple(sorted(current))
    return CutSolution(
        removed,
        instance.cost_of(removed),
        cut.mode,
        cut.beta,
        tuple(thresholds),
        cut.trace,
        cut.rung,
    )
