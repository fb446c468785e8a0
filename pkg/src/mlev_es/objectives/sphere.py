import numpy as np

from .base import Objective


def sphere(x):
    """Sum of squares; no counting."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.dot(x, x))


class Sphere(Objective):
    """Quadratic bowl placed on a 1-D grid, minimum 0 at the origin."""

    name = "sphere"
    init_low = -5.0
    init_high = 5.0
    default_sigma0 = 10.0 / 3.0
    has_sigma_star = True

    def _evaluate(self, x):
        return sphere(x)


def sphere_eval(x, counter=None):
    if counter is not None:
        counter.increment()
    return sphere(x)
