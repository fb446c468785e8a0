"""Compare the numba kernels against the pure-numpy fallback.

Each backend is timed in its own interpreter, since the backend is fixed at
import time by ``MLEV_ES_DISABLE_NUMBA``::

    python3 benchmarks/bench_kernels.py [--repeat R]
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

_CHILD_FLAG = "--child"


def _cases():
    import numpy as np

    from mlev_es import kernels
    from mlev_es.framework import FixedTarget, LevelSchedule, run_mlev
    from mlev_es.objectives import Sphere
    from mlev_es.strategies import SepCmaState, sep_cma_step

    rng = np.random.default_rng(0)
    x = np.sort(rng.random(64))
    y = rng.standard_normal(64)
    xq = np.linspace(x[0], x[-1], 10_000)
    sig = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    ties = rng.integers(0, 20, 60).astype(float)
    sphere = Sphere()
    state = SepCmaState.create(rng.standard_normal(1000), 1.0)

    def mlev_run():
        run_mlev(Sphere(), LevelSchedule(10, 640), FixedTarget(0.05), "1p1", "U-3", seed=1)

    return {
        "standard_normal(1e4)": lambda: kernels.standard_normal(rng, 10_000),
        "pchip_eval(64 -> 1e4)": lambda: kernels.pchip_eval(x, y, xq),
        "self_convolve_direct(256)": lambda: kernels.self_convolve_direct(sig),
        "midranks(60, ties)": lambda: kernels.midranks(ties),
        "sep_cma_step(n=1000)": lambda: sep_cma_step(state, sphere, rng),
        "m-lev 1p1 sphere 10->640": mlev_run,
    }


def _child(repeat):
    from mlev_es import kernels

    out = {}
    for name, fn in _cases().items():
        fn()  # compile / warm caches
        reps = timeit.repeat(fn, number=1, repeat=repeat)
        out[name] = min(reps)
    print(json.dumps({"backend": kernels.BACKEND, "timings": out}))


def _run_backend(disable, repeat):
    env = dict(os.environ, MLEV_ES_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run(
        [sys.executable, __file__, _CHILD_FLAG, "--repeat", str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=20)
    p.add_argument(_CHILD_FLAG, action="store_true", help=argparse.SUPPRESS)
    args = p.parse_args(argv)
    if args.child:
        _child(args.repeat)
        return 0
    fast = _run_backend(False, args.repeat)
    slow = _run_backend(True, args.repeat)
    w = max(len(k) for k in fast["timings"])
    print(f"{'kernel':<{w}}  {fast['backend']:>12}  {slow['backend']:>12}  {'speed-up':>8}")
    for name, t_fast in fast["timings"].items():
        t_slow = slow["timings"][name]
        print(f"{name:<{w}}  {t_fast * 1e3:>10.3f}ms  {t_slow * 1e3:>10.3f}ms  {t_slow / t_fast:>7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
