"""Variant comparison: Friedman gate, then pairwise Mann-Whitney U tests."""
import csv
import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..stats import SIGNIFICANCE, FriedmanResult, describe, friedman, mann_whitney_u


@dataclass
class CompareReport:
    labels: list
    descriptions: dict
    friedman: Optional[FriedmanResult]
    pvalues: dict = field(default_factory=dict)
    winner: Optional[str] = None
    alpha: float = SIGNIFICANCE
    notes: list = field(default_factory=list)

    @property
    def pairwise_run(self):
        return bool(self.pvalues)

    def pvalue(self, a, b):
        return self.pvalues.get((a, b), self.pvalues.get((b, a)))

    def matrix(self):
        k = len(self.labels)
        m = np.full((k, k), np.nan)
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                if i != j:
                    p = self.pvalue(a, b)
                    if p is not None:
                        m[i, j] = p
        return m

    def rows(self):
        for lab in self.labels:
            d = self.descriptions[lab]
            yield {
                "variant": lab,
                "mean": d.mean,
                "ci99": d.ci99_halfwidth,
                "median": d.median,
                "success_runs": d.success_count,
                "best": lab == self.winner,
            }

    def to_text(self):
        w = max(len("variant"), *(len(lab) for lab in self.labels))
        head = f"{'variant':<{w}}  {'mean':>12}  {'ci99':>10}  {'median':>10}  {'s.r.':>5}"
        lines = [head, "-" * len(head)]
        for r in self.rows():
            mark = " *" if r["best"] else ""
            lines.append(
                f"{r['variant']:<{w}}  {r['mean']:>12.2f}  {r['ci99']:>10.2f}  "
                f"{r['median']:>10.1f}  {r['success_runs']:>5d}{mark}"
            )
        if self.friedman is not None:
            lines.append(
                f"Friedman chi2={self.friedman.statistic:.4f} p={self.friedman.p_value:.4g}"
            )
        if self.pvalues:
            lines.append("pairwise Mann-Whitney U p-values:")
            m = self.matrix()
            lines.append(" " * (w + 2) + "  ".join(f"{lab[:10]:>10}" for lab in self.labels))
            for i, lab in enumerate(self.labels):
                cells = ["         -" if i == j else f"{m[i, j]:>10.4g}" for j in range(len(self.labels))]
                lines.append(f"{lab:<{w}}  " + "  ".join(cells))
        if self.winner:
            lines.append(f"best (significant at {self.alpha:g}): {self.winner}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)

    def write_csv(self, table_path, matrix_path=None):
        with open(table_path, "w", newline="") as fh:
            w = csv.DictWriter(
                fh, ["variant", "mean", "ci99", "median", "success_runs", "best"], lineterminator="\n"
            )
            w.writeheader()
            for r in self.rows():
                w.writerow(r)
        if matrix_path and self.pvalues:
            m = self.matrix()
            with open(matrix_path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["variant", *self.labels])
                for lab, row in zip(self.labels, m):
                    w.writerow([lab, *("" if math.isnan(v) else repr(float(v)) for v in row)])


def compare_variants(samples, alpha=SIGNIFICANCE):
    """Compare evaluation-count samples of several variants.

    With three or more variants of equal size a Friedman test (blocks are
    repetition indices) gates the pairwise U tests; with two variants the U
    test runs directly. A variant is marked best when it has the lowest
    median and differs significantly from every other variant.
    """
    if len(samples) < 2:
        raise ValueError("need at least two samples to compare")
    labels = [s.label for s in samples]
    if len(set(labels)) != len(labels):
        raise ValueError("sample labels must be unique")
    by_label = {s.label: s for s in samples}
    descs = {s.label: describe(s) for s in samples}
    report = CompareReport(labels, descs, None, alpha=alpha)

    sizes = {len(s) for s in samples}
    run_pairs = True
    if len(samples) >= 3:
        if len(sizes) == 1:
            report.friedman = friedman(np.vstack([s.values for s in samples]))
            run_pairs = report.friedman.p_value < alpha
            if not run_pairs:
                report.notes.append("Friedman test did not reject; no pairwise tests")
        else:
            msg = "unequal repetition counts; Friedman test skipped, pairwise tests only"
            warnings.warn(msg)
            report.notes.append(msg)
    if not run_pairs:
        return report

    for a, b in itertools.combinations(labels, 2):
        report.pvalues[(a, b)] = mann_whitney_u(by_label[a], by_label[b], alpha=alpha).p_value

    best = min(labels, key=lambda lab: (descs[lab].median, descs[lab].mean))
    if all(report.pvalue(best, o) < alpha for o in labels if o != best):
        report.winner = best
    return report
