"""Fixed seeded benchmark suites.

Suite seeds are ``offset + 1000`` (mixed), ``offset + 2000`` (tradeoff) and
``offset + 3000`` (multicut), consecutive from there; see :func:`suites`.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor

from .generate import GenConfig, suite
from .graph import Instance
from .oracle import TooLarge, brute_force_opt
from .pipeline import solve

BETAS = (1.0, 1.5, 2.0)


def suites(offset: int = 0, count: int = 40) -> dict[str, tuple[list[Instance], tuple[float, ...]]]:
    mixed = GenConfig(model="gnp", n=7, p=0.5, demands=2, k_min=1, k_max=3)
    tradeoff = GenConfig(model="gnp", n=8, p=0.7, demands=2, k_min=2, k_max=4)
    multicut = GenConfig(model="gnp", n=9, p=0.35, demands=3, k_min=1, k_max=1)
    return {
        "mixed": (suite(mixed, count, offset + 1000), (1.0,)),
        "tradeoff": (suite(tradeoff, count, offset + 2000), BETAS),
        "multicut": (suite(multicut, count, offset + 3000), (1.0,)),
    }


def _run(job: tuple[str, int, Instance, float]) -> dict:
    name, index, instance, beta = job
    result = solve(instance, beta)
    lp = result.frac.objective
    cost = result.verification.cost
    run = {
        "suite": name,
        "index": index,
        "beta": beta,
        "demands": len(instance.demands),
        "lp_objective": lp,
        "cost": cost,
        "ratio": cost / lp if lp > 1e-12 else (1.0 if cost == 0 else None),
        "verified": result.verification.feasible,
        "oracle": None,
    }
    if beta == 1.0 and name == "mixed":
        try:
            run["oracle"] = brute_force_opt(instance, 12).cost
        except TooLarge:
            pass
    return run


def _sandwiched(run: dict) -> bool:
    return run["lp_objective"] <= run["oracle"] + 1e-6 and run["oracle"] <= run["cost"]


def _summary(values: list[float]) -> dict:
    if not values:
        return {}
    qs = statistics.quantiles(values, n=10) if len(values) > 1 else [values[0]] * 9
    return {
        "count": len(values),
        "min": min(values),
        "median": statistics.median(values),
        "mean": statistics.fmean(values),
        "p90": qs[8],
        "max": max(values),
    }


def run_bench(seed: int = 0, count: int = 40, jobs: int = 1) -> dict:
    jobs_list = [
        (name, i, inst, beta)
        for name, (instances, betas) in suites(seed, count).items()
        for i, inst in enumerate(instances)
        for beta in betas
    ]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            runs = list(pool.map(_run, jobs_list, chunksize=4))
    else:
        runs = [_run(j) for j in jobs_list]

    by = lambda name, beta=1.0: [r for r in runs if r["suite"] == name and r["beta"] == beta]  # noqa: E731
    mixed = by("mixed")
    tradeoff = {beta: by("tradeoff", beta) for beta in BETAS}
    multicut = by("multicut")
    per_instance = zip(*(sorted(rs, key=lambda r: r["index"]) for rs in tradeoff.values()))
    violations = sum(
        1 for row in per_instance if any(b["cost"] > a["cost"] for a, b in zip(row, row[1:]))
    )
    within = [
        r for r in multicut if r["ratio"] is not None and r["ratio"] <= 2 * math.log(r["demands"] + 1) + 1
    ]
    return {
        "seed": seed,
        "count": count,
        "runs": runs,
        "ratio": _summary([r["ratio"] for r in mixed if r["ratio"] is not None]),
        "sandwich_failures": sum(1 for r in mixed if r["oracle"] is not None and not _sandwiched(r)),
        "oracle_gap": _summary([r["cost"] / r["oracle"] for r in mixed if r["oracle"]]),
        "tradeoff": {
            str(beta): {
                "mean_cost": statistics.fmean(r["cost"] for r in rs),
                "mean_ratio": statistics.fmean(r["ratio"] for r in rs if r["ratio"] is not None),
                "verified": sum(r["verified"] for r in rs),
                "count": len(rs),
            }
            for beta, rs in tradeoff.items()
        },
        "monotone_violations": violations,
        "multicut": {
            "within_bound": len(within),
            "count": len(multicut),
            "ratio": _summary([r["ratio"] for r in multicut if r["ratio"] is not None]),
        },
        "all_verified": all(r["verified"] for r in runs),
    }


def format_tables(results: dict) -> str:
    out = [f"mrc bench (seed offset {results['seed']}, {results['count']} instances per suite)", ""]
    r = results["ratio"]
    out.append("cost / LP ratio, mixed suite (k in 1..3)")
    out.append(f"  min {r['min']:.3f}  median {r['median']:.3f}  mean {r['mean']:.3f}  p90 {r['p90']:.3f}  max {r['max']:.3f}")
    if results["oracle_gap"]:
        g = results["oracle_gap"]
        out.append(f"  cost / OPT over {g['count']} oracle runs: mean {g['mean']:.3f}  max {g['max']:.3f}")
    out.append(f"  sandwich failures: {results['sandwich_failures']}")
    out.append("")
    out.append("threshold relaxation tradeoff (k in 2..4)")
    out.append(f"  {'beta':>5} {'mean cost':>10} {'mean ratio':>11} {'verified':>9}")
    for beta, row in results["tradeoff"].items():
        out.append(f"  {float(beta):>5.2f} {row['mean_cost']:>10.3f} {row['mean_ratio']:>11.3f} {row['verified']:>4}/{row['count']}")
    out.append(f"  instances where cost rises with beta: {results['monotone_violations']}")
    out.append("")
    mc = results["multicut"]
    out.append(f"multicut (k = 1): ratio <= 2 ln(p+1) + 1 on {mc['within_bound']}/{mc['count']}")
    out.append(f"all runs verified: {results['all_verified']}")
    return "\n".join(out) + "\n"
