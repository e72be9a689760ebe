"""Exhaustive ground truth for small instances.

Nothing in here shares code paths with the LP or the min-cost flow; the
subset search only uses the plain max-flow feasibility test, and the
disconnecting-set search does not use flows at all.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Sequence

from .flow import DisjointPathSet, is_feasible
from .graph import Graph, Instance, Number, Semantics


class TooLarge(ValueError):
    """Raised when an instance has more removable items than the oracle cap."""


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    cost: Number | None
    removed: tuple[int, ...]
    optimal_count: int
    explored: int

    def to_dict(self) -> dict:
        return {
            "status": "optimal" if self.feasible else "infeasible",
            "cost": self.cost,
            "removed": list(self.removed),
            "optimal_count": self.optimal_count,
            "explored": self.explored,
        }


def brute_force_opt(
    instance: Instance,
    size_cap: int = 20,
    thresholds: Sequence[int] | None = None,
) -> OracleResult:
    """Cheapest feasible removal set by best-first subset enumeration.

    Subsets come off the heap in nondecreasing cost, so the first feasible one
    is optimal.  The search then drains every subset of the same cost to count
    the optimal sets.
    """
    items = instance.removable()
    if len(items) > size_cap:
        raise TooLarge(f"{len(items)} removable items exceed the cap of {size_cap}")
    if thresholds is None:
        thresholds = [d.k for d in instance.demands]

    if not is_feasible(instance, items, thresholds):
        return OracleResult(False, None, (), 0, 1)

    tol = 0 if instance.integral else 1e-9
    order = sorted(items, key=lambda i: (instance.costs[i], i))
    w = [instance.costs[i] for i in order]
    heap: list[tuple[Number, tuple[int, ...]]] = [(0, ())]
    explored = 0
    best: tuple[Number, tuple[int, ...]] | None = None
    count = 0
    while heap:
        cost, idx = heapq.heappop(heap)
        if best is not None and cost > best[0] + tol:
            break
        explored += 1
        chosen = [order[j] for j in idx]
        if is_feasible(instance, chosen, thresholds):
            count += 1
            if best is None:
                best = (cost, tuple(sorted(chosen)))
        if idx:
            last = idx[-1]
            if last + 1 < len(order):
                heapq.heappush(heap, (cost + w[last + 1], idx + (last + 1,)))
                heapq.heappush(heap, (cost - w[last] + w[last + 1], idx[:-1] + (last + 1,)))
        elif order:
            heapq.heappush(heap, (w[0], (0,)))
    assert best is not None
    return OracleResult(True, instance.cost_of(best[1]), best[1], count, explored)


# --------------------------------------------------------------------------
# path enumeration


def simple_paths(graph: Graph, u: int, v: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All simple ``u``-``v`` paths as ``(vertices, edge ids)``, in DFS edge-id order."""
    adj = graph.incidence()
    out = []
    nodes, eids = [u], []
    on_path = {u}

    def dfs(x: int) -> None:
        if x == v:
            out.append((tuple(nodes), tuple(eids)))
            return
        for e, y in adj[x]:
            if y in on_path:
                continue
            nodes.append(y)
            eids.append(e)
            on_path.add(y)
            dfs(y)
            on_path.discard(y)
            nodes.pop()
            eids.pop()

    dfs(u)
    return out


@dataclass(frozen=True)
class PathEnumeration:
    sets: list[DisjointPathSet]
    partial: bool


def enumerate_disjoint_path_sets(
    graph: Graph,
    u: int,
    v: int,
    k: int,
    semantics: Semantics = Semantics.EDGE_DISJOINT,
    metric: Sequence[float] | None = None,
    limit: int = 200_000,
) -> PathEnumeration:
    """Every set of ``k`` pairwise disjoint simple ``u``-``v`` paths.

    Disjointness respects edge capacities: a set is admissible when no edge
    is used by more paths than its capacity.  Sets are emitted in
    lexicographic order of path indices.
    """
    paths = simple_paths(graph, u, v)
    metric = metric if metric is not None else [0.0] * graph.m
    sets: list[DisjointPathSet] = []
    partial = False

    def compatible(chosen: list[int], j: int) -> bool:
        use = {}
        for i in chosen + [j]:
            for e in paths[i][1]:
                use[e] = use.get(e, 0) + 1
                if use[e] > graph.cap(e):
                    return False
        if semantics is Semantics.VERTEX_DISJOINT:
            inner = set(paths[j][0][1:-1])
            for i in chosen:
                if inner & set(paths[i][0][1:-1]):
                    return False
        return True

    def extend(chosen: list[int], start: int) -> None:
        nonlocal partial
        if partial:
            return
        if len(chosen) == k:
            if len(sets) >= limit:
                partial = True
                return
            ps = [paths[i] for i in chosen]
            union = frozenset(e for _, es in ps for e in es)
            sets.append(
                DisjointPathSet(
                    tuple(p for p, _ in ps),
                    tuple(es for _, es in ps),
                    union,
                    sum(metric[e] for _, es in ps for e in es),
                    sum(metric[e] for e in union),
                )
            )
            return
        for j in range(start, len(paths)):
            if compatible(chosen, j):
                chosen.append(j)
                extend(chosen, j + 1)
                chosen.pop()

    extend([], 0)
    return PathEnumeration(sets, partial)


def min_union_length(
    graph: Graph, u: int, v: int, k: int, metric: Sequence[float], semantics: Semantics
) -> float | None:
    """Smallest metric weight of a ``k``-path union, or None if no ``k`` paths exist."""
    sets = enumerate_disjoint_path_sets(graph, u, v, k, semantics, metric).sets
    return min((s.union_length for s in sets), default=None)


# --------------------------------------------------------------------------
# disconnecting sets without flows


def _components(n: int, edges) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return [find(x) for x in range(n)]


def min_disconnecting_sizes(graph: Graph) -> dict[tuple[int, int], int]:
    """Minimum number of edges whose removal disconnects each vertex pair.

    Scans every edge subset of an undirected graph; meant for graphs with a
    dozen edges at most.
    """
    if graph.directed:
        raise ValueError("undirected graphs only")
    active = list(graph.active_edges())
    m = len(active)
    best = {(a, b): m for a, b in itertools.combinations(range(graph.n), 2)}
    for mask in range(1 << m):
        size = bin(mask).count("1")
        kept = [graph.edges[e] for i, e in enumerate(active) if not mask >> i & 1]
        comp = _components(graph.n, kept)
        for pair, cur in best.items():
            if size < cur and comp[pair[0]] != comp[pair[1]]:
                best[pair] = size
    return best
