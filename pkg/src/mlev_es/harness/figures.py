"""CSV data behind the convergence plots and the evaluation-count boxplots."""
import csv
import glob
import json
import math
import os

import numpy as np

from ..trace import FIELDS, RunTrace, _format_row

KINDS = ("convergence", "boxplot")


def percentile_index(n, percentile):
    """Index of the ``percentile`` run among ``n`` sorted runs.

    ``ceil(p / 100 * n) - 1``, clamped to ``[0, n - 1]``; the 50th
    percentile of an even count is the lower median.
    """
    if n < 1:
        raise ValueError("no runs to select from")
    if not 0.0 <= percentile <= 100.0:
        raise ValueError("percentile must lie in [0, 100]")
    return min(max(math.ceil(percentile / 100.0 * n) - 1, 0), n - 1)


def select_run(traces, percentile=50.0):
    """Return ``(position, trace)`` of the percentile run by total evaluations.

    Ties in the evaluation count keep the input order (stable sort).
    """
    traces = list(traces)
    totals = np.array([t.final_evaluation for t in traces])
    order = np.argsort(totals, kind="stable")
    pos = int(order[percentile_index(len(traces), percentile)])
    return pos, traces[pos]


def load_traces(trace_dir):
    """Read every ``run_*.csv`` in ``trace_dir`` in file-name order."""
    paths = sorted(glob.glob(os.path.join(trace_dir, "run_*.csv")))
    return [RunTrace.from_csv(p) for p in paths]


def _write_convergence(trace, path):
    starts = {m.first_evaluation for m in trace.levels}
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELDS + ("level_boundary",))
        for row in trace.data:
            w.writerow(_format_row(row) + [int(int(row[0]) in starts)])


def _write_boxplot(samples, path):
    labels = list(samples)
    cols = [np.asarray(samples[k], dtype=np.int64) for k in labels]
    rows = max(c.size for c in cols)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(labels)
        for i in range(rows):
            w.writerow([str(c[i]) if i < c.size else "" for c in cols])


def _as_counts(item):
    if hasattr(item, "values") and not isinstance(item, dict):
        return np.asarray(item.values)
    return np.array([t.final_evaluation for t in item])


def emit_figure_data(traces, kind, out_dir, percentile=50.0, name=None):
    """Write figure data and return the list of files written.

    Parameters
    ----------
    traces : sequence of RunTrace or mapping
        ``convergence`` takes the runs of one variant; the selected
        percentile run is written with its sigma and sigma* columns and a
        ``level_boundary`` flag on the first record of each level.
        ``boxplot`` takes ``{label: runs or SampleSet}`` and writes one
        column of evaluation counts per variant.
    kind : {"convergence", "boxplot"}
    out_dir : str
    percentile : float
        Run selection for ``convergence``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; expected one of {KINDS}")
    if not traces:
        raise ValueError("empty trace set")
    os.makedirs(out_dir, exist_ok=True)
    if kind == "convergence":
        if isinstance(traces, dict):
            raise ValueError("convergence data takes the runs of a single variant")
        _, tr = select_run(traces, percentile)
        tag = f"p{percentile:g}"
        path = os.path.join(out_dir, f"{name or 'convergence'}_{tag}.csv")
        _write_convergence(tr, path)
        return [path]
    if not isinstance(traces, dict):
        raise ValueError("boxplot data takes a mapping of variant label to runs")
    samples = {k: _as_counts(v) for k, v in traces.items()}
    if any(s.size == 0 for s in samples.values()):
        raise ValueError("empty trace set for a variant")
    path = os.path.join(out_dir, f"{name or 'boxplot'}.csv")
    _write_boxplot(samples, path)
    return [path]


def variant_dirs(root):
    """Result directories below ``root`` (or ``root`` itself) as ``{label: dir}``."""
    dirs = [root] if glob.glob(os.path.join(root, "run_*.csv")) else []
    if not dirs:
        dirs = sorted(
            d for d in glob.glob(os.path.join(root, "*"))
            if os.path.isdir(d) and glob.glob(os.path.join(d, "run_*.csv"))
        )
    out = {}
    for d in dirs:
        label = os.path.basename(os.path.normpath(d))
        summary = os.path.join(d, "summary.json")
        if os.path.exists(summary):
            with open(summary) as fh:
                label = json.load(fh).get("label", label)
        out[label] = d
    return out
