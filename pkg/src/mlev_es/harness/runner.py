"""Batch execution of an experiment config."""
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..framework import BUDGET_EXHAUSTED, run_mlev
from ..objectives import make_objective
from ..stats import SampleSet, describe
from .config import ExperimentConfig, default_output_root, dump_config

log = logging.getLogger(__name__)

SUMMARY_FILE = "summary.json"


@dataclass
class RunRecord:
    seed: int
    evaluations: int
    final_f: float
    status: str
    per_level_evaluations: list
    dims: list
    trace_file: str = ""

    @property
    def censored(self):
        return self.status == BUDGET_EXHAUSTED


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: list
    traces: list
    output_dir: str

    @property
    def sample(self):
        return SampleSet(
            self.config.name,
            [r.evaluations for r in self.runs],
            [r.censored for r in self.runs],
        )


def run_single(config, seed):
    """Execute one repetition; returns ``(RunRecord, RunTrace)``."""
    model = make_objective(config.problem, n_sim=config.n_sim, omega_max=config.omega_max)
    res = run_mlev(
        model,
        config.schedule(),
        config.criterion(),
        strategy=config.strategy,
        operator=config.operator,
        seed=seed,
        global_budget=config.global_budget,
        sigma0=config.effective_sigma0,
        trace_stride=config.trace_stride,
    )
    rec = RunRecord(
        seed=int(seed),
        evaluations=int(res.total_evaluations),
        final_f=float(res.final_f),
        status=res.status,
        per_level_evaluations=[int(v) for v in res.per_level_evaluations],
        dims=[int(v) for v in res.dims],
    )
    return rec, res.trace


def _run_seed(args):
    config, seed = args
    return run_single(config, seed)


def _check_writable(path):
    os.makedirs(path, exist_ok=True)
    probe = os.path.join(path, ".write-test")
    with open(probe, "w") as fh:
        fh.write("")
    os.remove(probe)


def run_experiment(config, jobs=None, out=None, write=True):
    """Run ``config.repetitions`` seeds ``base_seed + i`` and persist the results.

    Files are written only by this (aggregating) process, after all
    workers have returned, in seed order.
    """
    out_dir = out or config.output_dir or os.path.join(default_output_root(), config.name)
    if write:
        _check_writable(out_dir)
    seeds = [config.base_seed + i for i in range(config.repetitions)]
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(seeds) == 1:
        results = [run_single(config, s) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(seeds))) as pool:
            results = list(pool.map(_run_seed, [(config, s) for s in seeds]))
    runs = [r for r, _ in results]
    traces = [t for _, t in results]
    if write:
        for rec, tr in zip(runs, traces):
            rec.trace_file = f"run_{rec.seed:06d}.csv"
            tr.to_csv(os.path.join(out_dir, rec.trace_file))
        dump_config(config, os.path.join(out_dir, "config.ini"))
        write_summary(config, runs, os.path.join(out_dir, SUMMARY_FILE))
    log.info("%s: %d runs written to %s", config.name, len(runs), out_dir)
    return ExperimentResult(config, runs, traces, out_dir)


def write_summary(config, runs, path):
    sample = SampleSet(config.name, [r.evaluations for r in runs], [r.censored for r in runs])
    doc = {
        "label": config.name,
        "config": config.to_dict(),
        "runs": [
            {
                "seed": r.seed,
                "evaluations": r.evaluations,
                "final_f": r.final_f,
                "status": r.status,
                "censored": r.censored,
                "per_level_evaluations": r.per_level_evaluations,
                "dims": r.dims,
                "trace_file": r.trace_file,
            }
            for r in runs
        ],
    }
    if len(runs) >= 2:
        d = describe(sample)
        doc["describe"] = {
            "mean": d.mean,
            "median": d.median,
            "ci99_halfwidth": d.ci99_halfwidth,
            "success_count": d.success_count,
        }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")


def load_summary(path):
    """Read a summary file (or the summary inside a result directory)."""
    if os.path.isdir(path):
        path = os.path.join(path, SUMMARY_FILE)
    with open(path) as fh:
        doc = json.load(fh)
    runs = doc["runs"]
    return SampleSet(
        doc["label"],
        [r["evaluations"] for r in runs],
        [r["censored"] for r in runs],
    ), doc
