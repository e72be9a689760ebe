"""Seeded instance generators.

Randomness comes from SplitMix64 so that an instance is a pure function of
its parameters in any language:

* ``next_u64``: ``state += 0x9E3779B97F4A7C15``, then the standard SplitMix64
  finalizer on the new state.
* ``below(n)``: rejection sampling on ``next_u64`` against the largest
  multiple of ``n`` that fits in 64 bits, then ``% n``.
* ``uniform()``: ``(next_u64 >> 11) * 2**-53``.

Every draw below happens in the order written in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .flow import connectivity
from .graph import Demand, Graph, Instance, Removal, Semantics

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    model: str = "gnp"  # gnp | grid | multi
    n: int = 8
    p: float = 0.4
    rows: int = 3
    cols: int = 3
    m: int = 12
    cost_min: int = 1
    cost_max: int = 10
    demands: int = 2
    k_min: int = 1
    k_max: int = 2
    removal: Removal = Removal.EDGE
    semantics: Semantics = Semantics.EDGE_DISJOINT
    seed: int = 0


def _edges(cfg: GenConfig, rng: SplitMix64) -> tuple[int, list[tuple[int, int]]]:
    if cfg.model == "gnp":
        if not 0 <= cfg.p <= 1:
            raise GeneratorError("edge probability must lie in [0, 1]")
        edges = [(a, b) for a in range(cfg.n) for b in range(a + 1, cfg.n) if rng.uniform() < cfg.p]
        return cfg.n, edges
    if cfg.model == "grid":
        if cfg.rows < 1 or cfg.cols < 1:
            raise GeneratorError("grid needs positive dimensions")
        edges = []
        for r in range(cfg.rows):
            for c in range(cfg.cols):
                w = r * cfg.cols + c
                if c + 1 < cfg.cols:
                    edges.append((w, w + 1))
                if r + 1 < cfg.rows:
                    edges.append((w, w + cfg.cols))
        return cfg.rows * cfg.cols, edges
    if cfg.model == "multi":
        if cfg.n < 2:
            raise GeneratorError("multigraph needs at least two vertices")
        edges = []
        for _ in range(cfg.m):
            a = rng.below(cfg.n)
            b = rng.below(cfg.n - 1)
            if b >= a:
                b += 1
            edges.append((a, b))
        return cfg.n, edges
    raise GeneratorError(f"unknown model {cfg.model!r}")


def generate_instance(cfg: GenConfig) -> Instance:
    """Build an instance whose demands all start at connectivity >= their threshold.

    Pairs are drawn without replacement among those with connectivity at
    least ``k_min``; each threshold is then drawn from
    ``[k_min, min(k_max, connectivity)]``.
    """
    if cfg.k_min < 1 or cfg.k_max < cfg.k_min:
        raise GeneratorError("need 1 <= k_min <= k_max")
    if cfg.cost_min < 0 or cfg.cost_max < cfg.cost_min:
        raise GeneratorError("need 0 <= cost_min <= cost_max")
    rng = SplitMix64(cfg.seed)
    n, edges = _edges(cfg, rng)
    graph = Graph(n, tuple(edges))
    count = len(edges) if cfg.removal is Removal.EDGE else n
    costs = tuple(rng.between(cfg.cost_min, cfg.cost_max) for _ in range(count))

    candidates = []
    for a in range(n):
        for b in range(a + 1, n):
            lam = connectivity(graph, a, b, cfg.semantics, limit=cfg.k_max)
            if lam >= cfg.k_min:
                candidates.append((a, b, lam))
    if cfg.demands > len(candidates):
        if not candidates:
            raise GeneratorError("no vertex pair reaches the minimum threshold")
        raise GeneratorError(f"asked for {cfg.demands} demands, only {len(candidates)} pairs qualify")
    demands = []
    for i in range(cfg.demands):
        j = i + rng.below(len(candidates) - i)
        candidates[i], candidates[j] = candidates[j], candidates[i]
        a, b, lam = candidates[i]
        demands.append(Demand(a, b, rng.between(cfg.k_min, min(cfg.k_max, lam))))
    return Instance(graph, costs, tuple(demands), cfg.removal, cfg.semantics)


def suite(base: GenConfig, count: int, first_seed: int = 0) -> list[Instance]:
    """``count`` instances from consecutive seeds; seeds that cannot host the
    requested demands are skipped, so the suite is still a fixed list."""
    out = []
    seed = first_seed
    while len(out) < count:
        try:
            out.append(generate_instance(replace(base, seed=seed)))
        except GeneratorError:
            pass
        seed += 1
        if seed - first_seed > 100 * count + 1000:
            raise GeneratorError("generator parameters rarely produce valid instances")
    return out

