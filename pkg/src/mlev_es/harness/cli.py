"""Command-line entry point.

::

    mlev-es run <config> [--seed S] [--reps R] [--jobs J] [--out DIR]
    mlev-es compare <summary files...> [--out DIR]
    mlev-es figure <kind> <trace dir> [--percentile P] [--out DIR]

Exit codes: 0 success, 1 configuration error, 2 runtime error.
The default output root is taken from ``MLEV_ES_OUTPUT_DIR``.
"""
import argparse
import logging
import os
import sys

from ..errors import ConfigError
from .config import load_config
from .figures import KINDS, emit_figure_data, load_traces, variant_dirs
from .report import compare_variants
from .runner import load_summary, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _parser():
    p = argparse.ArgumentParser(prog="mlev-es", description="Multi-level evolution strategies.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the repetitions of an experiment config")
    r.add_argument("config")
    r.add_argument("--seed", type=int, help="base seed (overrides the config)")
    r.add_argument("--reps", type=int, help="number of repetitions (overrides the config)")
    r.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    r.add_argument("--out", help="output directory")

    c = sub.add_parser("compare", help="Friedman and pairwise U tests over run summaries")
    c.add_argument("summaries", nargs="+")
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("--out", help="directory for comparison.csv and pvalues.csv")

    f = sub.add_parser("figure", help="emit CSV data for a figure")
    f.add_argument("kind", choices=KINDS)
    f.add_argument("trace_dir")
    f.add_argument("--percentile", type=float, default=50.0)
    f.add_argument("--out", help="output directory (default: the trace dir)")
    return p


def _run(args):
    config = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["base_seed"] = args.seed
    if args.reps is not None:
        changes["repetitions"] = args.reps
    if changes:
        config = config.replace(**changes)
    if args.jobs is not None and args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    res = run_experiment(config, jobs=args.jobs, out=args.out)
    evals = [r.evaluations for r in res.runs]
    print(f"{config.name}: {len(evals)} runs, evaluations min={min(evals)} max={max(evals)}")
    print(f"written to {res.output_dir}")


def _compare(args):
    samples = [load_summary(p)[0] for p in args.summaries]
    report = compare_variants(samples, alpha=args.alpha)
    print(report.to_text())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        report.write_csv(
            os.path.join(args.out, "comparison.csv"), os.path.join(args.out, "pvalues.csv")
        )


def _figure(args):
    out = args.out or args.trace_dir
    if args.kind == "convergence":
        traces = load_traces(args.trace_dir)
        if not traces:
            raise ValueError(f"no run_*.csv traces in {args.trace_dir}")
        paths = emit_figure_data(traces, "convergence", out, percentile=args.percentile)
    else:
        dirs = variant_dirs(args.trace_dir)
        if not dirs:
            raise ValueError(f"no trace directories under {args.trace_dir}")
        paths = emit_figure_data({k: load_traces(d) for k, d in dirs.items()}, "boxplot", out)
    for p in paths:
        print(p)


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    handler = {"run": _run, "compare": _compare, "figure": _figure}[args.command]
    try:
        handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - every other failure maps to exit 2
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
