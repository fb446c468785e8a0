"""The environment flag selects the numpy kernels; both paths give bitwise-equal runs."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

SCRIPT = """
import json, sys
import numpy as np
from mlev_es import kernels
from mlev_es.framework import FixedTarget, run_mlev
from mlev_es.objectives import Sphere, TPA, SpectralGrid
out = {"backend": kernels.BACKEND, "runs": {}}
for strategy in ("1p1", "sepC"):
    for op in ("U-1", "U-2", "U-3"):
        r = run_mlev(Sphere(), [10, 20, 40], FixedTarget(0.05), strategy, op, seed=3)
        out["runs"][f"sphere-{strategy}-{op}"] = r.trace.data.tolist()
r = run_mlev(TPA("tpa-2", SpectralGrid(256)), [16, 32], FixedTarget(0.2), "sepC", "U-3",
             seed=1, global_budget=400)
out["runs"]["tpa"] = r.trace.data.tolist()
json.dump(out, sys.stdout)
"""


def _run(disable):
    env = dict(os.environ, MLEV_ES_DISABLE_NUMBA="1" if disable else "0")
    r = subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, env=env,
                       check=True)
    return json.loads(r.stdout)


@pytest.fixture(scope="module")
def both():
    return _run(False), _run(True)


def test_flag_selects_backend(both):
    fast, slow = both
    assert slow["backend"] == "numpy"
    assert fast["backend"] in ("numba", "numpy")


def test_backends_produce_same_traces(both):
    fast, slow = both
    for key, rows in fast["runs"].items():
        a = np.array(rows, dtype=float)
        b = np.array(slow["runs"][key], dtype=float)
        assert a.shape == b.shape, key
        assert np.array_equal(a, b, equal_nan=True), key
