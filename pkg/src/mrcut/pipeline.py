"""End-to-end solve: LP, rounding, pruning, verification, optional oracle.

Reports are plain dicts following the ``mrc-report/1`` schema (see the
README).  Everything except the ``timings`` block is a deterministic
function of the instance and the run configuration.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from .flow import VerificationReport, connectivity, verify_cut
from .graph import (
    Instance,
    Removal,
    VertexSplitMap,
    effective_thresholds,
    serialize_instance,
    vertex_split_transform,
)
from .lp import FracSolution, LPNumericalError, LpReport, Tolerances, solve_lp
from .oracle import OracleResult, TooLarge, brute_force_opt
from .rounding import CutSolution, InfeasibleError, round_exact

SCHEMA = "mrc-report/1"

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3
EXIT_NONCONVERGED = 4


@dataclass(frozen=True)
class RunConfig:
    mode: str = "exact"
    beta: float = 1.0
    tol: Tolerances = field(default_factory=Tolerances)
    oracle_cap: int = 12

    def __post_init__(self):
        if self.mode not in ("exact", "bicriteria"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if self.mode == "exact" and self.beta != 1:
            raise ValueError("exact mode uses beta = 1; pick bicriteria for beta > 1")

    @property
    def effective_beta(self) -> float:
        return self.beta if self.mode == "bicriteria" else 1.0


@dataclass
class SolveResult:
    frac: FracSolution
    lp: LpReport
    cut: CutSolution
    removed: tuple[int, ...]
    verification: VerificationReport
    split: VertexSplitMap | None = None


def instance_digest(instance: Instance) -> str:
    try:
        text = serialize_instance(instance)
    except ValueError:
        text = repr(instance)
    return hashlib.sha256(text.encode()).hexdigest()


def infeasible_demand(instance: Instance, thresholds) -> int | None:
    """First demand that stays at or above its threshold with every removable item gone."""
    g = instance.apply(instance.removable())
    for i, (d, t) in enumerate(zip(instance.demands, thresholds)):
        if connectivity(g, d.u, d.v, instance.semantics, limit=t) >= t:
            return i
    return None


def solve(instance: Instance, beta: float = 1.0, tol: Tolerances = Tolerances()) -> SolveResult:
    """LP plus rounding; vertex-removal instances go through the split graph.

    Raises :class:`InfeasibleError` if some demand cannot be satisfied at all.
    """
    thresholds = effective_thresholds(instance, beta)
    bad = infeasible_demand(instance, thresholds)
    if bad is not None:
        d = instance.demands[bad]
        raise InfeasibleError(bad, f"demand {bad} ({d.u}, {d.v}) cannot be brought below {thresholds[bad]}")
    split = None
    work = instance
    if instance.removal is Removal.VERTEX:
        work, split = vertex_split_transform(instance)
    frac, report, _ = solve_lp(work, tol)
    cut = round_exact(work, frac.x, beta, frac.objective)
    removed = tuple(split.to_vertices(cut.removed)) if split else cut.removed
    verification = verify_cut(instance, removed, thresholds)
    return SolveResult(frac, report, cut, removed, verification, split)


def _ratio(cost: float, lp: float) -> float | None:
    if lp > 1e-12:
        return cost / lp
    return 1.0 if cost == 0 else None


def run_pipeline(instance: Instance, config: RunConfig = RunConfig()) -> tuple[dict, int]:
    """Solve, verify and report.  Returns ``(report, exit code)``."""
    beta = config.effective_beta
    timings: dict[str, float] = {}
    report: dict = {
        "schema": SCHEMA,
        "instance": {
            "digest": instance_digest(instance),
            "n": instance.graph.n,
            "m": instance.graph.m,
            "demands": len(instance.demands),
            "removal": instance.removal.value,
            "semantics": instance.semantics.value,
        },
        "mode": config.mode,
        "beta": beta,
        "thresholds": effective_thresholds(instance, beta),
    }
    start = time.perf_counter()
    try:
        result = solve(instance, beta, config.tol)
    except InfeasibleError as exc:
        report.update(status="infeasible", error={"code": "infeasible", "demand": exc.demand, "message": str(exc)})
        timings["solve"] = time.perf_counter() - start
        report["timings"] = timings
        return report, EXIT_INFEASIBLE
    except LPNumericalError as exc:
        report.update(status="lp_numerical_error", error={"code": "lp_numerical_error", "message": str(exc)})
        report["timings"] = timings
        return report, EXIT_NONCONVERGED
    timings["solve"] = time.perf_counter() - start

    cost = result.verification.cost
    report["lp"] = result.lp.to_dict()
    report["cut"] = {
        "items": "vertices" if instance.removal is Removal.VERTEX else "edges",
        "removed": list(result.removed),
        "cost": cost,
        "rung": result.cut.rung,
    }
    report["ratio"] = _ratio(float(cost), result.frac.objective)
    report["verification"] = result.verification.to_dict()
    report["trace"] = result.cut.trace

    oracle = None
    if config.oracle_cap > 0:
        start = time.perf_counter()
        try:
            oracle = brute_force_opt(instance, config.oracle_cap, report["thresholds"])
            report["oracle"] = oracle.to_dict()
        except TooLarge:
            report["oracle"] = {"status": "too_large", "cap": config.oracle_cap}
        timings["oracle"] = time.perf_counter() - start
    else:
        report["oracle"] = None

    if not result.verification.feasible:
        status, code = "verification_failed", EXIT_INFEASIBLE
    elif result.lp.status != "optimal":
        status, code = "nonconverged", EXIT_NONCONVERGED
    else:
        status, code = "ok", EXIT_OK
    report["status"] = status
    report["timings"] = timings
    return report, code


def strip_timings(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timings"}


__all__ = [
    "EXIT_INFEASIBLE",
    "EXIT_INPUT",
    "EXIT_NONCONVERGED",
    "EXIT_OK",
    "OracleResult",
    "RunConfig",
    "SCHEMA",
    "SolveResult",
    "infeasible_demand",
    "instance_digest",
    "run_pipeline",
    "solve",
    "strip_timings",
]
