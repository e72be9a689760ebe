"""Multigraph, instance model and the text instance format.

Instance format (line oriented, ``#`` starts a comment)::

    p mrc <n> <m> <q>
    variant <edge|vertex> <edge|vertex>
    e <a> <b> <cost>        # m lines; no cost field for vertex removal
    v <id> <cost>           # n lines, vertex removal only
    q <u> <v> <k>           # q lines

The first variant token is what gets removed, the second the kind of
disjointness used to count connectivity.  Pairs with threshold infinity
are simply not listed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Sequence


class Removal(str, enum.Enum):
    EDGE = "edge"
    VERTEX = "vertex"


class Semantics(str, enum.Enum):
    EDGE_DISJOINT = "edge"
    VERTEX_DISJOINT = "vertex"


class InstanceFormatError(ValueError):
    """Raised for malformed instance text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


Number = int | float


def _as_number(value: float) -> Number:
    if isinstance(value, int):
        return value
    if float(value).is_integer():
        return int(value)
    return float(value)


@dataclass(frozen=True)
class Graph:
    """Multigraph on vertices ``0..n-1`` with stable edge ids.

    ``removed`` masks edges without touching the edge list, so a masked
    graph is a cheap view that shares everything with its parent.  Edges are
    undirected unless ``directed`` is set (used only for split graphs);
    ``capacity`` is the number of disjoint paths an edge may carry.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    directed: bool = False
    capacity: tuple[int, ...] | None = None
    removed: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for i, (a, b) in enumerate(self.edges):
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge {i} endpoint out of range: ({a}, {b})")
            if a == b:
                raise ValueError(f"edge {i} is a self-loop")
        if self.capacity is not None and len(self.capacity) != len(self.edges):
            raise ValueError("capacity list length must match edge count")

    @property
    def m(self) -> int:
        return len(self.edges)

    def cap(self, e: int) -> int:
        return 1 if self.capacity is None else self.capacity[e]

    def active_edges(self) -> Iterator[int]:
        for e in range(len(self.edges)):
            if e not in self.removed:
                yield e

    def without_edges(self, ids: Iterable[int]) -> Graph:
        ids = frozenset(ids)
        for e in ids:
            if not 0 <= e < len(self.edges):
                raise ValueError(f"invalid edge id {e}")
        return replace(self, removed=self.removed | ids)

    def without_vertices(self, vertices: Iterable[int]) -> Graph:
        """Mask every edge incident to ``vertices``; vertex ids are unchanged."""
        vs = set(vertices)
        for w in vs:
            if not 0 <= w < self.n:
                raise ValueError(f"invalid vertex id {w}")
        hit = [e for e, (a, b) in enumerate(self.edges) if a in vs or b in vs]
        return replace(self, removed=self.removed | frozenset(hit))

    def base(self) -> Graph:
        return replace(self, removed=frozenset())

    def incidence(self) -> list[list[tuple[int, int]]]:
        """Per-vertex list of ``(edge id, other endpoint)`` over active edges.

        For directed graphs only outgoing arcs are listed.
        """
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e in self.active_edges():
            a, b = self.edges[e]
            adj[a].append((e, b))
            if not self.directed:
                adj[b].append((e, a))
        return adj


def remove_edges(graph: Graph, removed: Iterable[int]) -> Graph:
    """Return a view of ``graph`` with ``removed`` masked; ``graph`` is untouched."""
    return graph.without_edges(removed)


@dataclass(frozen=True)
class Demand:
    u: int
    v: int
    k: int

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"demand endpoints equal ({self.u})")
        if self.k < 1:
            raise ValueError(f"threshold must be >= 1, got {self.k}")


@dataclass(frozen=True)
class Instance:
    """A multi-route cut instance.

    ``costs`` is indexed by edge id for edge removal and by vertex id for
    vertex removal.  ``fixed`` lists items that may never be removed; the
    vertex-split transform uses it for its sentinel-cost edges.
    """

    graph: Graph
    costs: tuple[Number, ...]
    demands: tuple[Demand, ...]
    removal: Removal = Removal.EDGE
    semantics: Semantics = Semantics.EDGE_DISJOINT
    fixed: frozenset[int] = frozenset()

    def __post_init__(self):
        expected = self.graph.m if self.removal is Removal.EDGE else self.graph.n
        if len(self.costs) != expected:
            raise ValueError(f"expected {expected} costs, got {len(self.costs)}")
        for c in self.costs:
            if not math.isfinite(c) or c < 0:
                raise ValueError(f"costs must be finite and nonnegative, got {c}")
        seen = set()
        for d in self.demands:
            if not (0 <= d.u < self.graph.n and 0 <= d.v < self.graph.n):
                raise ValueError(f"demand endpoint out of range: ({d.u}, {d.v})")
            key = frozenset((d.u, d.v))
            if key in seen:
                raise ValueError(f"duplicate demand pair ({d.u}, {d.v})")
            seen.add(key)
        if self.semantics is Semantics.VERTEX_DISJOINT and self.graph.directed:
            raise ValueError("vertex-disjoint semantics needs an undirected graph")

    @property
    def items(self) -> range:
        return range(len(self.costs))

    def protected(self) -> frozenset[int]:
        """Items that no cut may contain."""
        if self.removal is Removal.VERTEX:
            terminals = {w for d in self.demands for w in (d.u, d.v)}
            return frozenset(terminals) | self.fixed
        return self.fixed

    def removable(self) -> list[int]:
        banned = self.protected()
        return [i for i in self.items if i not in banned]

    def cost_of(self, items: Iterable[int]) -> Number:
        return sum((self.costs[i] for i in items), 0)

    def apply(self, items: Iterable[int]) -> Graph:
        """The graph after removing ``items`` (edges or vertices per the variant)."""
        if self.removal is Removal.EDGE:
            return self.graph.without_edges(items)
        return self.graph.without_vertices(items)

    @property
    def integral(self) -> bool:
        return all(isinstance(c, int) for c in self.costs)


def effective_threshold(k: int, beta: float) -> int:
    """Relaxed threshold ``ceil(beta * k)``, robust to float noise in ``beta``."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    return max(k, math.ceil(beta * k - 1e-9))


def effective_thresholds(instance: Instance, beta: float = 1.0) -> list[int]:
    return [effective_threshold(d.k, beta) for d in instance.demands]


# --------------------------------------------------------------------------
# text format


_VARIANTS = {"edge": Removal.EDGE, "vertex": Removal.VERTEX}
_SEMANTICS = {"edge": Semantics.EDGE_DISJOINT, "vertex": Semantics.VERTEX_DISJOINT}


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(f"expected integer {what}, got {tok!r}", lineno) from None


def _cost(tok: str, lineno: int) -> Number:
    try:
        value = float(tok)
    except ValueError:
        raise InstanceFormatError(f"expected numeric cost, got {tok!r}", lineno) from None
    if not math.isfinite(value):
        raise InstanceFormatError(f"cost must be finite, got {tok!r}", lineno)
    if value < 0:
        raise InstanceFormatError(f"negative cost {tok!r}", lineno)
    try:
        return int(tok)
    except ValueError:
        return _as_number(value)


def parse_instance(text: str) -> Instance:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            lines.append((lineno, body))
    if not lines:
        raise InstanceFormatError("empty instance")

    lineno, head = lines[0]
    if len(head) != 5 or head[:2] != ["p", "mrc"]:
        raise InstanceFormatError("expected 'p mrc <n> <m> <q>'", lineno)
    n, m, q = (_int(t, lineno, "count") for t in head[2:])
    if min(n, m, q) < 0:
        raise InstanceFormatError("counts must be nonnegative", lineno)

    if len(lines) < 2:
        raise InstanceFormatError("missing variant line", lineno)
    lineno, var = lines[1]
    if len(var) != 3 or var[0] != "variant":
        raise InstanceFormatError("expected 'variant <edge|vertex> <edge|vertex>'", lineno)
    if var[1] not in _VARIANTS or var[2] not in _SEMANTICS:
        raise InstanceFormatError(f"unknown variant token in {' '.join(var)!r}", lineno)
    removal, semantics = _VARIANTS[var[1]], _SEMANTICS[var[2]]

    edges: list[tuple[int, int]] = []
    edge_costs: list[Number] = []
    vertex_costs: dict[int, Number] = {}
    demands: list[Demand] = []
    pairs: set[frozenset[int]] = set()

    def vertex(tok: str, lineno: int) -> int:
        w = _int(tok, lineno, "vertex id")
        if not 0 <= w < n:
            raise InstanceFormatError(f"endpoint {w} out of range [0, {n})", lineno)
        return w

    for lineno, toks in lines[2:]:
        tag = toks[0]
        if tag == "e":
            want = 3 if removal is Removal.VERTEX else 4
            if len(toks) != want:
                raise InstanceFormatError(f"'e' line needs {want - 1} fields", lineno)
            a, b = vertex(toks[1], lineno), vertex(toks[2], lineno)
            if a == b:
                raise InstanceFormatError(f"self-loop at vertex {a}", lineno)
            edges.append((a, b))
            if removal is Removal.EDGE:
                edge_costs.append(_cost(toks[3], lineno))
        elif tag == "v":
            if removal is not Removal.VERTEX:
                raise InstanceFormatError("'v' line only allowed for vertex removal", lineno)
            if len(toks) != 3:
                raise InstanceFormatError("'v' line needs 2 fields", lineno)
            w = vertex(toks[1], lineno)
            if w in vertex_costs:
                raise InstanceFormatError(f"duplicate cost for vertex {w}", lineno)
            vertex_costs[w] = _cost(toks[2], lineno)
        elif tag == "q":
            if len(toks) != 4:
                raise InstanceFormatError("'q' line needs 3 fields", lineno)
            u, v = vertex(toks[1], lineno), vertex(toks[2], lineno)
            k = _int(toks[3], lineno, "threshold")
            if u == v:
                raise InstanceFormatError(f"demand endpoints equal ({u})", lineno)
            if k < 1:
                raise InstanceFormatError(f"threshold must be >= 1, got {k}", lineno)
            key = frozenset((u, v))
            if key in pairs:
                raise InstanceFormatError(f"duplicate demand pair ({u}, {v})", lineno)
            pairs.add(key)
            demands.append(Demand(u, v, k))
        else:
            raise InstanceFormatError(f"unknown line tag {tag!r}", lineno)

    last = lines[-1][0]
    if len(edges) != m:
        raise InstanceFormatError(f"header declares {m} edges, found {len(edges)}", last)
    if len(demands) != q:
        raise InstanceFormatError(f"header declares {q} demands, found {len(demands)}", last)
    if removal is Removal.VERTEX:
        if len(vertex_costs) != n:
            raise InstanceFormatError(f"expected {n} 'v' lines, found {len(vertex_costs)}", last)
        costs = tuple(vertex_costs[w] for w in range(n))
    else:
        costs = tuple(edge_costs)

    return Instance(Graph(n, tuple(edges)), costs, tuple(demands), removal, semantics)


def _fmt_cost(c: Number) -> str:
    return str(c) if isinstance(c, int) else repr(float(c))


def serialize_instance(instance: Instance) -> str:
    g = instance.graph
    if g.directed or g.capacity is not None or instance.fixed or g.removed:
        raise ValueError("only plain undirected instances have a text form")
    out = [
        f"p mrc {g.n} {g.m} {len(instance.demands)}",
        f"variant {instance.removal.value} {instance.semantics.value}",
    ]
    if instance.removal is Removal.EDGE:
        out += [f"e {a} {b} {_fmt_cost(c)}" for (a, b), c in zip(g.edges, instance.costs)]
    else:
        out += [f"e {a} {b}" for a, b in g.edges]
        out += [f"v {w} {_fmt_cost(c)}" for w, c in enumerate(instance.costs)]
    out += [f"q {d.u} {d.v} {d.k}" for d in instance.demands]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# vertex split


@dataclass(frozen=True)
class VertexSplitMap:
    """Correspondence between a vertex-removal instance and its split form.

    Vertex ``w`` becomes nodes ``2w`` (in) and ``2w + 1`` (out) joined by the
    internal edge with id ``w``.  Original edge ``e = {a, b}`` becomes the
    arcs ``n + 2e`` (a_out -> b_in) and ``n + 2e + 1`` (b_out -> a_in).
    """

    forward: dict[int, tuple[int, int, int]]
    instance: Instance
    sentinel: Number
    original_n: int = field(default=0)

    def to_vertices(self, edge_ids: Iterable[int]) -> list[int]:
        out = []
        for e in edge_ids:
            if e >= self.original_n:
                raise ValueError(f"edge {e} is not an internal edge")
            out.append(e)
        return sorted(out)

    def to_edges(self, vertices: Iterable[int]) -> list[int]:
        return sorted(self.forward[w][2] for w in vertices)


def sentinel_cost(costs: Sequence[Number]) -> Number:
    return 1 + sum(costs)


def vertex_split_transform(instance: Instance) -> tuple[Instance, VertexSplitMap]:
    """Reduce a vertex-removal instance to edge removal on a split graph.

    Orientation is what keeps paths honest: every undirected edge turns into
    a pair of arcs out->in, so any path through ``w`` must use ``w``'s
    internal edge.  Internal edges carry capacity 1 under vertex-disjoint
    semantics and ``max(1, m)`` otherwise.  Demand ``(u, v)`` is routed from
    ``u_out`` to ``v_in``.
    """
    if instance.removal is not Removal.VERTEX:
        raise ValueError("vertex_split_transform needs a vertex-removal instance")
    g = instance.graph
    n, m = g.n, g.m
    big = sentinel_cost(instance.costs)
    internal_cap = 1 if instance.semantics is Semantics.VERTEX_DISJOINT else max(1, m)

    edges: list[tuple[int, int]] = [(2 * w, 2 * w + 1) for w in range(n)]
    caps: list[int] = [internal_cap] * n
    for a, b in g.edges:
        edges.append((2 * a + 1, 2 * b))
        edges.append((2 * b + 1, 2 * a))
        caps += [1, 1]

    terminals = {w for d in instance.demands for w in (d.u, d.v)}
    costs: list[Number] = [big if w in terminals else instance.costs[w] for w in range(n)]
    costs += [big] * (2 * m)
    fixed = frozenset(terminals) | frozenset(range(n, n + 2 * m))
    demands = tuple(Demand(2 * d.u + 1, 2 * d.v, d.k) for d in instance.demands)

    split = Instance(
        Graph(2 * n, tuple(edges), directed=True, capacity=tuple(caps)),
        tuple(costs),
        demands,
        Removal.EDGE,
        Semantics.EDGE_DISJOINT,
        fixed,
    )
    forward = {w: (2 * w, 2 * w + 1, w) for w in range(n)}
    return split, VertexSplitMap(forward, split, big, n)
