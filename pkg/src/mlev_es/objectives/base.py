import math

import numpy as np

TWO_PI = 2.0 * math.pi


class EvalCounter:
    """Counts objective calls; one instance per run."""

    __slots__ = ("count",)

    def __init__(self, count=0):
        self.count = int(count)

    def increment(self, k=1):
        self.count += k
        return self.count

    def __int__(self):
        return self.count

    def __repr__(self):
        return f"EvalCounter({self.count})"


def wrap_periodic(x):
    """Map phases onto ``[0, 2*pi)``.

    ``np.mod`` can return exactly ``2*pi`` for tiny negative inputs because of
    rounding; those entries are folded back to 0.
    """
    w = np.mod(np.asarray(x, dtype=np.float64), TWO_PI)
    w[w >= TWO_PI] = 0.0
    return w


class Objective:
    """Base class for a problem model that can be formed at any grid size.

    Subclasses implement ``_evaluate``. Calling the instance counts the
    evaluation on ``counter``.
    """

    name = "objective"
    periodic = False
    init_low = 0.0
    init_high = 1.0
    default_sigma0 = 1.0
    has_sigma_star = False

    def __init__(self, counter=None):
        self.counter = counter if counter is not None else EvalCounter()

    def validate_dim(self, n):
        if n < 1:
            raise ValueError(f"dimension must be positive, got {n}")

    def random_init(self, rng, n):
        return rng.uniform(self.init_low, self.init_high, size=n)

    def _evaluate(self, x):
        raise NotImplementedError

    def __call__(self, x):
        self.counter.increment()
        return self._evaluate(x)
