"""Per-evaluation run records and their CSV form."""
import csv
import math
from dataclasses import dataclass

import numpy as np

FIELDS = (
    "evaluation_index",
    "objective_value",
    "best_value",
    "sigma",
    "sigma_star",
    "level",
    "n_level",
)

_INT_FIELDS = {"evaluation_index", "level", "n_level"}


@dataclass
class LevelMark:
    level: int
    n: int
    first_evaluation: int


class RunTrace:
    """Evaluation log of one run.

    Records are kept every ``stride`` evaluations; the first evaluation of
    each level and the final evaluation are always kept, so level
    boundaries and the total count survive thinning.

    ``best_value`` is the best objective value seen on the current level
    (the parent value for the elitist (1+1)-ES); ``sigma_star`` is only
    filled for the sphere.
    """

    _CHUNK = 4096

    def __init__(self, stride=1):
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.stride = int(stride)
        self._buf = np.empty((self._CHUNK, len(FIELDS)))
        self._size = 0
        self._last = None
        self._force_next = False
        self.levels = []
        self.status = None

    def mark_level(self, level, n, first_evaluation):
        self.levels.append(LevelMark(level, n, first_evaluation))
        self._force_next = True

    def append(self, index, f, best, sigma, sigma_star, level, n):
        row = (index, f, best, sigma, sigma_star, level, n)
        if self._force_next or index % self.stride == 0:
            self._push(row)
            self._force_next = False
            self._last = None
        else:
            self._last = row

    def _push(self, row):
        if self._size == self._buf.shape[0]:
            self._buf = np.concatenate([self._buf, np.empty_like(self._buf)])
        self._buf[self._size] = row
        self._size += 1

    def finish(self, status):
        if self._last is not None:
            self._push(self._last)
            self._last = None
        self.status = status

    def __len__(self):
        return self._size

    @property
    def data(self):
        return self._buf[: self._size]

    def column(self, name):
        col = self.data[:, FIELDS.index(name)]
        return col.astype(np.int64) if name in _INT_FIELDS else col

    @property
    def final_evaluation(self):
        return int(self.data[-1, 0]) if self._size else 0

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(FIELDS)
            for row in self.data:
                w.writerow(_format_row(row))

    @classmethod
    def from_csv(cls, path):
        tr = cls()
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            if tuple(header) != FIELDS:
                raise ValueError(f"{path}: unexpected trace header {header}")
            for rec in r:
                tr._push(tuple(float(v) if v != "" else math.nan for v in rec))
        prev = None
        for row in tr.data:
            level = int(row[5])
            if level != prev:
                tr.levels.append(LevelMark(level, int(row[6]), int(row[0])))
                prev = level
        return tr


def _format_row(row):
    out = []
    for name, v in zip(FIELDS, row):
        if name in _INT_FIELDS:
            out.append(str(int(v)))
        elif math.isnan(v):
            out.append("")
        else:
            out.append(repr(float(v)))
    return out
