"""Flow-based connectivity oracles.

Everything here runs on a small residual network built per call from a
graph view, so the functions are pure and safe to call concurrently.
Undirected edges become a pair of opposite arcs; vertex-disjoint counting
goes through the usual in/out split with unit internal capacity.
"""

from __future__ import annotations

import heapq
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, Instance, Number, Semantics


def selfcheck_enabled() -> bool:
    return os.environ.get("MRC_SELFCHECK", "") not in ("", "0")


class _Network:
    """Residual network with paired arcs (arc ``i ^ 1`` is the reverse of ``i``)."""

    __slots__ = ("adj", "head", "cap", "cost", "tag", "orig")

    def __init__(self, size: int):
        self.adj: list[list[int]] = [[] for _ in range(size)]
        self.head: list[int] = []
        self.cap: list[float] = []
        self.cost: list[float] = []
        # tag: ("e", edge id) or ("v", vertex id) for split internals, None otherwise
        self.tag: list[tuple[str, int] | None] = []
        self.orig: list[float] = []

    def add(self, a: int, b: int, cap: float, cost: float = 0.0, tag=None) -> int:
        i = len(self.head)
        for frm, to, c, w in ((a, b, cap, cost), (b, a, 0, -cost)):
            self.adj[frm].append(len(self.head))
            self.head.append(to)
            self.cap.append(c)
            self.cost.append(w)
            self.tag.append(tag)
            self.orig.append(c)
        return i

    def flow(self, arc: int) -> float:
        return self.orig[arc] - self.cap[arc]

    def tail(self, arc: int) -> int:
        return self.head[arc ^ 1]


@dataclass
class _Built:
    net: _Network
    source: int
    sink: int
    # per original node of the network, the graph vertex it stands for
    owner: list[int]
    # forward arcs grouped by edge id
    arcs_of: dict[int, list[int]]


def _build(
    graph: Graph,
    u: int,
    v: int,
    semantics: Semantics,
    *,
    metric: Sequence[float] | None = None,
    weights: Sequence[float] | None = None,
) -> _Built:
    """Build the flow network for a ``u``-``v`` query.

    ``weights`` replaces the unit capacities (used for cost-weighted cuts);
    ``metric`` attaches per-edge arc costs.
    """
    n = graph.n
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertex id out of range: ({u}, {v})")
    if u == v:
        raise ValueError("connectivity query needs distinct endpoints")
    arcs_of: dict[int, list[int]] = {}

    def cap_of(e: int) -> float:
        return weights[e] if weights is not None else graph.cap(e)

    def cost_of(e: int) -> float:
        return metric[e] if metric is not None else 0.0

    if semantics is Semantics.EDGE_DISJOINT:
        net = _Network(n)
        for e in graph.active_edges():
            a, b = graph.edges[e]
            arcs = [net.add(a, b, cap_of(e), cost_of(e), ("e", e))]
            if not graph.directed:
                arcs.append(net.add(b, a, cap_of(e), cost_of(e), ("e", e)))
            arcs_of[e] = arcs
        return _Built(net, u, v, list(range(n)), arcs_of)

    if graph.directed:
        raise ValueError("vertex-disjoint semantics needs an undirected graph")
    net = _Network(2 * n)
    big = float(sum(graph.cap(e) for e in graph.active_edges()) + 1)
    for w in range(n):
        net.add(2 * w, 2 * w + 1, big if w in (u, v) else 1, 0.0, ("v", w))
    for e in graph.active_edges():
        a, b = graph.edges[e]
        arcs_of[e] = [
            net.add(2 * a + 1, 2 * b, cap_of(e), cost_of(e), ("e", e)),
            net.add(2 * b + 1, 2 * a, cap_of(e), cost_of(e), ("e", e)),
        ]
    owner = [w // 2 for w in range(2 * n)]
    return _Built(net, 2 * u + 1, 2 * v, owner, arcs_of)


def _augment_max(net: _Network, s: int, t: int, limit: float = float("inf")) -> float:
    """Edmonds-Karp; arcs are scanned in insertion (edge id) order."""
    total = 0.0
    while total < limit:
        parent = [-1] * len(net.adj)
        parent[s] = -2
        queue = deque([s])
        while queue and parent[t] == -1:
            x = queue.popleft()
            for arc in net.adj[x]:
                y = net.head[arc]
                if parent[y] == -1 and net.cap[arc] > 1e-12:
                    parent[y] = arc
                    queue.append(y)
        if parent[t] == -1:
            break
        push = limit - total
        y = t
        while y != s:
            arc = parent[y]
            push = min(push, net.cap[arc])
            y = net.tail(arc)
        y = t
        while y != s:
            arc = parent[y]
            net.cap[arc] -= push
            net.cap[arc ^ 1] += push
            y = net.tail(arc)
        total += push
    return total


def _reachable(net: _Network, s: int) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        x = stack.pop()
        for arc in net.adj[x]:
            y = net.head[arc]
            if y not in seen and net.cap[arc] > 1e-12:
                seen.add(y)
                stack.append(y)
    return seen


@dataclass(frozen=True)
class FlowResult:
    """Maximum flow value with a minimum cut witness.

    For vertex-disjoint counting the witness mixes separator vertices with
    edges that run directly between the sides (parallel ``u``-``v`` edges).
    """

    value: Number
    cut_edges: tuple[int, ...]
    cut_vertices: tuple[int, ...] = ()
    source_side: frozenset[int] = frozenset()


def _cut_witness(b: _Built) -> tuple[tuple[int, ...], tuple[int, ...], float, frozenset[int]]:
    net = b.net
    side = _reachable(net, b.source)
    edges, vertices, capacity = set(), set(), 0.0
    for x in side:
        for arc in net.adj[x]:
            if arc & 1 or net.head[arc] in side:
                continue
            capacity += net.orig[arc]
            kind, ident = net.tag[arc]
            (edges if kind == "e" else vertices).add(ident)
    owners = frozenset(b.owner[x] for x in side)
    return tuple(sorted(edges)), tuple(sorted(vertices)), capacity, owners


def max_flow(
    graph: Graph,
    u: int,
    v: int,
    semantics: Semantics = Semantics.EDGE_DISJOINT,
    weights: Sequence[float] | None = None,
) -> FlowResult:
    """Max ``u``-``v`` flow; with ``weights`` the witness is a min-weight cut."""
    b = _build(graph, u, v, semantics, weights=weights)
    value = _augment_max(b.net, b.source, b.sink)
    edges, vertices, capacity, side = _cut_witness(b)
    if selfcheck_enabled() and abs(capacity - value) > 1e-9 * max(1.0, value):
        raise AssertionError(f"max-flow {value} != witness cut capacity {capacity}")
    if weights is None:
        value = int(round(value))
    return FlowResult(value, edges, vertices, side)


def edge_connectivity(graph: Graph, u: int, v: int) -> int:
    """Maximum number of pairwise edge-disjoint ``u``-``v`` paths."""
    return max_flow(graph, u, v, Semantics.EDGE_DISJOINT).value


def vertex_connectivity(graph: Graph, u: int, v: int) -> int:
    """Maximum number of internally vertex-disjoint ``u``-``v`` paths.

    Each parallel edge joining ``u`` and ``v`` directly counts as one path.
    """
    return max_flow(graph, u, v, Semantics.VERTEX_DISJOINT).value


def connectivity(graph: Graph, u: int, v: int, semantics: Semantics, limit: int | None = None) -> int:
    """Connectivity under ``semantics``; with ``limit`` the search stops once reached."""
    b = _build(graph, u, v, semantics)
    value = _augment_max(b.net, b.source, b.sink, float("inf") if limit is None else limit)
    return int(round(value))


# --------------------------------------------------------------------------
# min-cost disjoint paths


@dataclass(frozen=True)
class DisjointPathSet:
    """``k`` disjoint ``u``-``v`` paths.

    ``paths`` are vertex sequences, ``edge_paths`` the matching edge id
    sequences.  ``length`` sums the metric along every path; ``union_length``
    sums it once per edge of the union (equal for unit capacities).
    """

    paths: tuple[tuple[int, ...], ...]
    edge_paths: tuple[tuple[int, ...], ...]
    union: frozenset[int]
    length: float
    union_length: float

    @property
    def k(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class Insufficient:
    """Fewer than the requested number of disjoint paths exist."""

    value: int


def _dijkstra(net: _Network, s: int, potential: list[float]):
    dist = [float("inf")] * len(net.adj)
    parent = [-1] * len(net.adj)
    dist[s] = 0.0
    heap = [(0.0, s)]
    done = [False] * len(net.adj)
    while heap:
        d, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        for arc in net.adj[x]:
            if net.cap[arc] <= 1e-12:
                continue
            y = net.head[arc]
            reduced = net.cost[arc] + potential[x] - potential[y]
            if reduced < 0:
                # float drift only; true reduced costs are nonnegative
                reduced = 0.0
            nd = d + reduced
            if nd < dist[y]:
                dist[y] = nd
                parent[y] = arc
                heapq.heappush(heap, (nd, y))
    return dist, parent


def _decompose(b: _Built, count: int, graph: Graph) -> list[list[int]]:
    """Peel ``count`` unit source-sink paths off the current flow as arc lists."""
    net = b.net
    flow = {arc: net.flow(arc) for arc in range(0, len(net.head), 2) if net.flow(arc) > 1e-9}
    if not graph.directed and len(b.owner) == graph.n:
        # opposite flows on one undirected edge cancel
        for arcs in b.arcs_of.values():
            if len(arcs) == 2:
                common = min(flow.get(arcs[0], 0.0), flow.get(arcs[1], 0.0))
                if common > 1e-9:
                    flow[arcs[0]] -= common
                    flow[arcs[1]] -= common
    paths = []
    for _ in range(count):
        walk_nodes = [b.source]
        walk_arcs: list[int] = []
        while walk_nodes[-1] != b.sink:
            x = walk_nodes[-1]
            nxt = next((a for a in net.adj[x] if not a & 1 and flow.get(a, 0.0) > 1e-9), None)
            if nxt is None:
                raise RuntimeError("flow decomposition ran dry")
            y = net.head[nxt]
            if y in walk_nodes:
                # cancel the cycle closed by nxt and rewind the walk
                i = walk_nodes.index(y)
                for a in walk_arcs[i:] + [nxt]:
                    flow[a] -= 1
                del walk_nodes[i + 1 :]
                del walk_arcs[i:]
                continue
            walk_nodes.append(y)
            walk_arcs.append(nxt)
        for a in walk_arcs:
            flow[a] -= 1
        paths.append(walk_arcs)
    return paths


def min_cost_k_flow(
    graph: Graph,
    metric: Sequence[float],
    u: int,
    v: int,
    k: int,
    semantics: Semantics = Semantics.EDGE_DISJOINT,
) -> DisjointPathSet | Insufficient:
    """Cheapest ``k`` disjoint ``u``-``v`` paths under ``metric`` edge lengths.

    Successive shortest augmenting paths with Johnson potentials, so the
    Dijkstra search only ever sees nonnegative reduced costs.  Ties go to
    the arc discovered first, i.e. the lowest edge id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(metric) != graph.m:
        raise ValueError("metric length must match edge count")
    if any(x < 0 for x in metric):
        raise ValueError("metric entries must be nonnegative")
    b = _build(graph, u, v, semantics, metric=metric)
    net = b.net
    potential = [0.0] * len(net.adj)
    sent = 0
    while sent < k:
        dist, parent = _dijkstra(net, b.source, potential)
        if parent[b.sink] == -1:
            break
        for x, d in enumerate(dist):
            if d < float("inf"):
                potential[x] += d
        push = k - sent
        y = b.sink
        while y != b.source:
            arc = parent[y]
            push = min(push, net.cap[arc])
            y = net.tail(arc)
        push = int(push)
        y = b.sink
        while y != b.source:
            arc = parent[y]
            net.cap[arc] -= push
            net.cap[arc ^ 1] += push
            y = net.tail(arc)
        sent += push
    if sent < k:
        return Insufficient(sent)

    arc_paths = _decompose(b, k, graph)
    paths, edge_paths, union = [], [], set()
    length = 0.0
    for arcs in arc_paths:
        nodes = [b.owner[b.source]]
        eids = []
        for a in arcs:
            kind, ident = net.tag[a]
            if kind == "e":
                eids.append(ident)
                length += metric[ident]
            w = b.owner[net.head[a]]
            if w != nodes[-1]:
                nodes.append(w)
        paths.append(tuple(nodes))
        edge_paths.append(tuple(eids))
        union.update(eids)
    union_length = sum(metric[e] for e in union)
    return DisjointPathSet(tuple(paths), tuple(edge_paths), frozenset(union), length, union_length)


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class PairStatus:
    u: int
    v: int
    k: int
    threshold: int
    achieved: int
    satisfied: bool


@dataclass(frozen=True)
class VerificationReport:
    pairs: tuple[PairStatus, ...]
    feasible: bool
    cost: Number
    removed: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "cost": self.cost,
            "removed": list(self.removed),
            "pairs": [
                {
                    "u": p.u,
                    "v": p.v,
                    "k": p.k,
                    "threshold": p.threshold,
                    "achieved": p.achieved,
                    "satisfied": p.satisfied,
                }
                for p in self.pairs
            ],
        }


class ProtectedItemError(ValueError):
    pass


def verify_cut(
    instance: Instance,
    removed,
    thresholds: Sequence[int] | None = None,
) -> VerificationReport:
    """Recompute every demand's connectivity after removing ``removed``.

    A demand is satisfied when its achieved connectivity is strictly below
    its threshold (the instance's own ``k`` unless ``thresholds`` is given).
    """
    removed = tuple(sorted(set(removed)))
    limit = len(instance.costs)
    for i in removed:
        if not 0 <= i < limit:
            raise ValueError(f"invalid {instance.removal.value} id {i}")
    banned = instance.protected().intersection(removed)
    if banned:
        raise ProtectedItemError(f"cut contains protected items {sorted(banned)}")
    if thresholds is None:
        thresholds = [d.k for d in instance.demands]
    g = instance.apply(removed)
    pairs = []
    for d, t in zip(instance.demands, thresholds):
        achieved = connectivity(g, d.u, d.v, instance.semantics)
        pairs.append(PairStatus(d.u, d.v, d.k, t, achieved, achieved < t))
    return VerificationReport(
        tuple(pairs),
        all(p.satisfied for p in pairs),
        instance.cost_of(removed),
        removed,
    )


def is_feasible(instance: Instance, removed, thresholds: Sequence[int]) -> bool:
    """Fast feasibility test: stops each flow as soon as the threshold is reached."""
    g = instance.apply(removed)
    return all(
        connectivity(g, d.u, d.v, instance.semantics, limit=t) < t
        for d, t in zip(instance.demands, thresholds)
    )


__all__ = [
    "DisjointPathSet",
    "FlowResult",
    "Insufficient",
    "PairStatus",
    "ProtectedItemError",
    "VerificationReport",
    "connectivity",
    "edge_connectivity",
    "is_feasible",
    "max_flow",
    "min_cost_k_flow",
    "vertex_connectivity",
    "verify_cut",
]

