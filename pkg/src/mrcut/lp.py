"""Cutting-plane solver for the multi-route cut LP relaxation.

    minimize    sum_e c_e x_e
    subject to  sum_{e in S} x_e >= 1   for every demand (u, v, k) and every
                                        union S of k disjoint u-v paths
                0 <= x_e <= 1

The row family is exponential; rows are generated on demand by a
min-cost k-flow in the metric x, which finds the cheapest union exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .flow import Insufficient, connectivity, min_cost_k_flow
from .graph import Instance, Removal

log = logging.getLogger(__name__)


class LPNumericalError(RuntimeError):
    """The master LP solver failed (distinct from non-convergence)."""


@dataclass(frozen=True)
class Tolerances:
    eps_sep: float = 1e-6
    eps_feas: float = 1e-7
    row_cap: int = 10_000


@dataclass(frozen=True)
class FracSolution:
    x: tuple[float, ...]
    objective: float


@dataclass(frozen=True)
class CutConstraint:
    demand: int
    edges: frozenset[int]
    # metric weight of the witness union when the row was created
    length: float = 0.0

    @property
    def violation(self) -> float:
        return 1.0 - self.length


SATISFIED = None


@dataclass
class LpReport:
    status: str
    objective: float
    rows: int
    rounds: int
    slacks: list[float | None]
    history: list[float] = field(default_factory=list)
    vacuous: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "objective": self.objective,
            "rows": self.rows,
            "rounds": self.rounds,
            "slacks": self.slacks,
            "vacuous": self.vacuous,
        }


@dataclass(frozen=True)
class MasterSolution:
    x: np.ndarray
    objective: float
    duals: np.ndarray


def solve_restricted_master(
    rows: Sequence[CutConstraint], costs: Sequence[float], upper: float = 1.0
) -> MasterSolution:
    """Minimize ``c.x`` over the current rows and the box ``[0, upper]``.

    Returns the row duals (nonnegative, one per row) as the optimality
    certificate.
    """
    m = len(costs)
    c = np.asarray(costs, dtype=float)
    if not rows:
        return MasterSolution(np.zeros(m), 0.0, np.zeros(0))
    a = np.zeros((len(rows), m))
    for i, row in enumerate(rows):
        a[i, list(row.edges)] = 1.0
    res = linprog(
        c,
        A_ub=-a,
        b_ub=-np.ones(len(rows)),
        bounds=[(0.0, upper)] * m,
        method="highs",
    )
    if res.status != 0:
        raise LPNumericalError(f"master LP failed: {res.message}")
    x = np.clip(res.x, 0.0, upper)
    return MasterSolution(x, float(c @ x), -np.asarray(res.ineqlin.marginals))


def live_demands(instance: Instance) -> tuple[list[int], list[int]]:
    """Split demand indices into those that need cutting and vacuous ones."""
    live, vacuous = [], []
    for i, d in enumerate(instance.demands):
        lam = connectivity(instance.graph, d.u, d.v, instance.semantics, limit=d.k)
        (live if lam >= d.k else vacuous).append(i)
    return live, vacuous


def separate(
    instance: Instance,
    x: Sequence[float],
    demand: int,
    eps_sep: float = 1e-6,
) -> CutConstraint | None:
    """Most violated row for one demand, or ``None`` when the demand is satisfied."""
    d = instance.demands[demand]
    metric = [max(0.0, float(v)) for v in x]
    found = min_cost_k_flow(instance.graph, metric, d.u, d.v, d.k, instance.semantics)
    if isinstance(found, Insufficient):
        return SATISFIED
    if found.union_length < 1.0 - eps_sep:
        return CutConstraint(demand, found.union, found.union_length)
    return SATISFIED


def _slack(instance: Instance, x: Sequence[float], demand: int) -> float | None:
    d = instance.demands[demand]
    found = min_cost_k_flow(instance.graph, list(x), d.u, d.v, d.k, instance.semantics)
    if isinstance(found, Insufficient):
        return None
    return found.union_length - 1.0


def solve_lp(
    instance: Instance, tol: Tolerances = Tolerances()
) -> tuple[FracSolution, LpReport, list[CutConstraint]]:
    """Cutting-plane loop: re-solve the master until no demand has a violated row.

    Each round separates every live demand in index order and adds all the
    violated rows at once.  The status is ``"optimal"`` or ``"nonconverged"``
    (row cap reached; the last ``x`` is still returned).
    """
    if instance.removal is not Removal.EDGE:
        raise ValueError("solve_lp works on edge-removal instances; split vertex instances first")
    live, vacuous = live_demands(instance)
    costs = [float(c) for c in instance.costs]
    rows: list[CutConstraint] = []
    seen: set[tuple[int, frozenset[int]]] = set()
    master = solve_restricted_master(rows, costs)
    history = [master.objective]
    rounds = 0
    status = "optimal"
    while True:
        rounds += 1
        new = []
        for i in live:
            row = separate(instance, master.x, i, tol.eps_sep)
            if row is None:
                continue
            key = (i, row.edges)
            if key in seen:
                # the master already holds this row; x violates it only by solver noise
                if row.violation > tol.eps_sep + 10 * tol.eps_feas:
                    raise LPNumericalError(f"master returned x violating a pooled row by {row.violation}")
                continue
            seen.add(key)
            new.append(row)
        if not new:
            break
        if len(rows) + len(new) > tol.row_cap:
            status = "nonconverged"
            log.warning("row cap %d reached after %d rounds", tol.row_cap, rounds)
            break
        rows.extend(new)
        master = solve_restricted_master(rows, costs)
        history.append(master.objective)
        log.debug("round %d: %d rows, objective %.9g", rounds, len(rows), master.objective)

    x = tuple(float(v) for v in master.x)
    slacks = [None if i in vacuous else _slack(instance, x, i) for i in range(len(instance.demands))]
    report = LpReport(status, master.objective, len(rows), rounds, slacks, history, vacuous)
    return FracSolution(x, master.objective), report, rows
