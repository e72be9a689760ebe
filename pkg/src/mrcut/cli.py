"""``mrc`` command line: gen, solve, verify, oracle, bench."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .flow import ProtectedItemError, verify_cut
from .generate import GenConfig, GeneratorError, generate_instance
from .graph import (
    Instance,
    InstanceFormatError,
    Removal,
    Semantics,
    effective_thresholds,
    parse_instance,
    serialize_instance,
)
from .lp import Tolerances
from .oracle import TooLarge, brute_force_opt
from .pipeline import (
    EXIT_INFEASIBLE,
    EXIT_INPUT,
    EXIT_OK,
    RunConfig,
    run_pipeline,
    strip_timings,
)

log = logging.getLogger("mrc")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_instance(path: str) -> Instance:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["exact", "bicriteria"], default="exact")
    p.add_argument("--beta", type=float, default=None, help="threshold relaxation (bicriteria only)")
    p.add_argument("--tol-sep", type=float, default=1e-6)
    p.add_argument("--row-cap", type=int, default=10_000)
    p.add_argument("--oracle-cap", type=int, default=12, help="0 disables the oracle")


def _run_config(args) -> RunConfig:
    beta = args.beta if args.beta is not None else (2.0 if args.mode == "bicriteria" else 1.0)
    return RunConfig(
        mode=args.mode,
        beta=beta,
        tol=Tolerances(eps_sep=args.tol_sep, row_cap=args.row_cap),
        oracle_cap=args.oracle_cap,
    )


def cmd_gen(args) -> int:
    cfg = GenConfig(
        model=args.model,
        n=args.n,
        p=args.p,
        rows=args.rows,
        cols=args.cols,
        m=args.m,
        cost_min=args.cost_min,
        cost_max=args.cost_max,
        demands=args.demands,
        k_min=args.k_min,
        k_max=args.k_max,
        removal=Removal(args.removal),
        semantics=Semantics(args.semantics),
        seed=args.seed,
    )
    _emit(serialize_instance(generate_instance(cfg)), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    report, code = run_pipeline(instance, _run_config(args))
    if args.no_timings:
        report = strip_timings(report)
    _emit(_dump(report), args.out)
    if args.csv:
        _append_csv(Path(args.csv), report)
    return code


def _append_csv(path: Path, report: dict) -> None:
    header = "digest,mode,beta,status,lp_objective,cut_cost,ratio,oracle_cost\n"
    lp = report.get("lp", {})
    oracle = report.get("oracle") or {}
    row = [
        report["instance"]["digest"][:16],
        report["mode"],
        report["beta"],
        report.get("status"),
        lp.get("objective", ""),
        report.get("cut", {}).get("cost", ""),
        report.get("ratio", ""),
        oracle.get("cost", ""),
    ]
    new = not path.exists()
    with path.open("a") as fh:
        if new:
            fh.write(header)
        fh.write(",".join("" if v is None else str(v) for v in row) + "\n")


def _removed_from(doc) -> list[int]:
    if isinstance(doc, list):
        return [int(i) for i in doc]
    if "cut" in doc:
        return [int(i) for i in doc["cut"]["removed"]]
    return [int(i) for i in doc["removed"]]


def cmd_verify(args) -> int:
    instance = _load_instance(args.instance)
    try:
        removed = _removed_from(json.loads(Path(args.solution).read_text()))
    except (ValueError, KeyError, TypeError) as exc:
        raise InstanceFormatError(f"unreadable solution file: {exc}") from None
    thresholds = effective_thresholds(instance, args.beta)
    report = verify_cut(instance, removed, thresholds).to_dict()
    report["schema"] = "mrc-verify/1"
    _emit(_dump(report), args.out)
    return EXIT_OK if report["feasible"] else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    instance = _load_instance(args.instance)
    thresholds = effective_thresholds(instance, args.beta)
    result = brute_force_opt(instance, args.oracle_cap, thresholds)
    doc = result.to_dict()
    doc["schema"] = "mrc-oracle/1"
    _emit(_dump(doc), args.out)
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def cmd_bench(args) -> int:
    from .bench import format_tables, run_bench

    results = run_bench(seed=args.seed, count=args.count, jobs=args.jobs)
    _emit(format_tables(results), None)
    if args.out:
        Path(args.out).write_text(_dump(results))
    if args.csv:
        Path(args.csv).write_text(results_csv(results))
    return EXIT_OK if results["all_verified"] else EXIT_INFEASIBLE


def results_csv(results: dict) -> str:
    lines = ["suite,index,beta,lp_objective,cost,ratio,verified"]
    for run in results["runs"]:
        lines.append(
            ",".join(
                str(run[k]) if run[k] is not None else ""
                for k in ("suite", "index", "beta", "lp_objective", "cost", "ratio", "verified")
            )
        )
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    # usage errors share the parse/config exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mrc", description="multi-route cut solver")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a seeded instance")
    g.add_argument("--model", choices=["gnp", "grid", "multi"], default="gnp")
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--p", type=float, default=0.4)
    g.add_argument("--rows", type=int, default=3)
    g.add_argument("--cols", type=int, default=3)
    g.add_argument("--m", type=int, default=12, help="edge count for the multigraph model")
    g.add_argument("--cost-min", type=int, default=1)
    g.add_argument("--cost-max", type=int, default=10)
    g.add_argument("--demands", type=int, default=2)
    g.add_argument("--k-min", type=int, default=1)
    g.add_argument("--k-max", type=int, default=2)
    g.add_argument("--removal", choices=["edge", "vertex"], default="edge")
    g.add_argument("--semantics", choices=["edge", "vertex"], default="edge")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="LP + rounding + verification, JSON report")
    s.add_argument("instance")
    _add_run_flags(s)
    s.add_argument("--out")
    s.add_argument("--csv", help="append a summary row to this CSV file")
    s.add_argument("--no-timings", action="store_true")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a removal set against the thresholds")
    v.add_argument("instance")
    v.add_argument("solution", help="report JSON, {'removed': [...]} or a bare id list")
    v.add_argument("--beta", type=float, default=1.0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exact optimum by exhaustive search")
    o.add_argument("instance")
    o.add_argument("--beta", type=float, default=1.0)
    o.add_argument("--oracle-cap", type=int, default=20)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="fixed seeded benchmark suite")
    b.add_argument("--seed", type=int, default=0, help="offset added to the documented suite seeds")
    b.add_argument("--count", type=int, default=40, help="instances per suite")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", help="write the full results JSON here")
    b.add_argument("--csv", help="write one CSV row per run here")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (InstanceFormatError, GeneratorError, TooLarge, ProtectedItemError, OSError) as exc:
        print(f"mrc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"mrc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
