from __future__ import annotations

import random

import pytest

from mrcut.graph import Demand, Graph, Instance, Removal, Semantics, parse_instance

TRIANGLE = """\
p mrc 3 3 1
variant edge edge
e 0 1 3
e 0 2 1
e 2 1 1
q 0 1 2
"""

# per-criterion pass/fail lines from test_acceptance, printed at session end
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")


@pytest.fixture
def triangle() -> Instance:
    """s=0, t=1, a=2; edges st (cost 3), sa (1), at (1); demand (s, t, 2)."""
    return parse_instance(TRIANGLE)


def make(n, edges, costs=None, demands=(), removal=Removal.EDGE, semantics=Semantics.EDGE_DISJOINT):
    if costs is None:
        costs = [1] * (len(edges) if removal is Removal.EDGE else n)
    return Instance(
        Graph(n, tuple(map(tuple, edges))),
        tuple(costs),
        tuple(Demand(*d) for d in demands),
        removal,
        semantics,
    )


def complete(n: int) -> Graph:
    return Graph(n, tuple((a, b) for a in range(n) for b in range(a + 1, n)))


def random_multigraph(rng: random.Random, n: int, m: int) -> Graph:
    edges = []
    for _ in range(m):
        a, b = rng.sample(range(n), 2)
        edges.append((a, b))
    return Graph(n, tuple(edges))
