"""Command-line experiment runner.

Subcommands: ``solve`` (one seeded run), ``bench`` (multi-seed batches with a
summary table), ``gantt`` (chart export from a report), ``curve`` (evolution
curves as columnar text).  Exit codes: 0 ok, 2 usage, 3 I/O error,
4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .instance_io import InstanceFormatError, load_instance
from .iwoa import IwoaParams, run_iwoa
from .gantt import chart_json, chart_svg
from .report import report_from_json, report_to_json, summarize, summary_table
from .woa import WoaParams, run_woa

EXIT_OK = 0
EXIT_IO = 3
EXIT_INVALID = 4

ALGORITHMS = ("woa", "iwoa")


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _params_from_args(args, algo: str):
    woa = WoaParams(
        population=args.pop,
        max_generations=args.gen,
        spiral_choice_prob=args.pi,
    )
    if algo == "woa":
        return woa
    return IwoaParams(
        woa=woa,
        levy_gamma=args.gamma,
        congestion_threshold=args.congestion_threshold,
        elite_fraction=args.elite_frac,
        sa_initial_temp=args.t0,
        sa_cooling=args.cooling,
    )


def _run_single(task):
    instance, algo, params, seed = task
    runner = run_woa if algo == "woa" else run_iwoa
    return runner(instance, params, seed)


def _cmd_solve(args) -> int:
    instance = load_instance(_read(args.instance))
    params = _params_from_args(args, args.algo)
    report = _run_single((instance, args.algo, params, args.seed))
    _write(args.out, report_to_json(report))
    print(
        f"{args.algo} seed={args.seed}: cmax={report.metrics.cmax} "
        f"twip={report.metrics.twip} ts={report.metrics.ts} tpb={report.metrics.tpb} "
        f"({report.wall_clock_s:.2f}s)",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_bench(args) -> int:
    instance = load_instance(_read(args.instance))
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for algo in algos:
        if algo not in ALGORITHMS:
            raise InstanceFormatError(f"unknown algorithm {algo!r} (choose from {ALGORITHMS})")
    if args.runs < 1:
        raise InstanceFormatError(f"--runs must be >= 1, got {args.runs}")

    tasks = [
        (instance, algo, _params_from_args(args, algo), args.seed + k)
        for algo in algos
        for k in range(args.runs)
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            reports = list(pool.map(_run_single, tasks))
    else:
        reports = [_run_single(task) for task in tasks]

    by_algo = {algo: reports[i * args.runs:(i + 1) * args.runs]
               for i, algo in enumerate(algos)}
    summaries = [summarize(algo, args.seed, by_algo[algo]) for algo in algos]
    sys.stdout.write(summary_table(summaries))

    if args.out:
        doc = {
            "instance": instance.name,
            "runs": args.runs,
            "base_seed": args.seed,
            "algorithms": {s.algorithm: s.stats for s in summaries},
            "per_run": {
                algo: [
                    {"seed": r.seed, "metrics": dict(zip(("cmax", "twip", "ts", "tpb"), r.metrics))}
                    for r in by_algo[algo]
                ]
                for algo in algos
            },
        }
        _write(args.out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_gantt(args) -> int:
    report = report_from_json(_read(args.report))
    if not report.best_sequence:
        raise InstanceFormatError(f"report {args.report} carries no schedule")
    if args.format == "svg":
        title = f"{report.instance.name} {report.algorithm} seed={report.seed}"
        _write(args.out, chart_svg(report.schedule, title=title))
    else:
        _write(args.out, chart_json(report.schedule))
    return EXIT_OK


def _cmd_curve(args) -> int:
    reports = [report_from_json(_read(path)) for path in args.reports]
    lengths = {len(r.curve) for r in reports}
    if len(lengths) != 1:
        raise InstanceFormatError(
            f"reports disagree on generation count: {sorted(lengths)}"
        )
    rows = len(reports[0].curve)
    lines = []
    if args.mean:
        lines.append("generation\tmean_best")
        for g in range(rows):
            mean = sum(r.curve[g] for r in reports) / len(reports)
            lines.append(f"{g + 1}\t{mean:.2f}")
    else:
        labels = [f"{r.algorithm}-s{r.seed}" for r in reports]
        lines.append("generation\t" + "\t".join(labels))
        for g in range(rows):
            lines.append(f"{g + 1}\t" + "\t".join(str(r.curve[g]) for r in reports))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bufshop",
        description="Buffer-limited flexible flow shop scheduling runs and reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_search_flags(p):
        p.add_argument("--gen", type=int, default=300, help="generations per run")
        p.add_argument("--np", dest="pop", type=int, default=30, help="population size")
        p.add_argument("--pi", type=float, default=0.5,
                       help="probability of the non-spiral update branch")
        p.add_argument("--gamma", type=float, default=1.5, help="heavy-tail exponent")
        p.add_argument("--congestion-threshold", type=float, default=0.01,
                       help="crowding level that triggers the reflection escape")
        p.add_argument("--elite-frac", type=float, default=0.10,
                       help="fraction of best individuals kept out of the escape")
        p.add_argument("--t0", type=float, default=None,
                       help="initial acceptance temperature (default: 0.1 x initial best)")
        p.add_argument("--cooling", type=float, default=0.97,
                       help="per-generation temperature factor")
        p.add_argument("--seed", type=int, default=0,
                       help="seed (bench: run k of each algorithm uses seed+k)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("solve", help="run one algorithm once and write its report")
    p.add_argument("instance", help="instance file path")
    p.add_argument("--algo", choices=ALGORITHMS, default="iwoa")
    add_search_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="multi-seed batches with a summary table")
    p.add_argument("instance", help="instance file path")
    p.add_argument("--algos", default="woa,iwoa", help="comma-separated algorithms")
    p.add_argument("--runs", type=int, default=30, help="seeded runs per algorithm")
    p.add_argument("--workers", type=int, default=1, help="concurrent runs")
    add_search_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gantt", help="render the schedule of a report")
    p.add_argument("report", help="report file path")
    p.add_argument("--format", choices=("svg", "json"), default="svg")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gantt)

    p = sub.add_parser("curve", help="tabulate evolution curves of reports")
    p.add_argument("reports", nargs="+", help="report file paths")
    p.add_argument("--mean", action="store_true", help="emit the across-run mean curve")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_curve)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"bufshop: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InstanceFormatError, ValueError, json.JSONDecodeError, KeyError) as exc:
        print(f"bufshop: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
