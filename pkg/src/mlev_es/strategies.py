"""Fixed-dimension evolution strategies: (1+1)-ES and (mu_W, lambda)-sep-CMA-ES.

Both step functions update their state in place and return what the
caller needs for bookkeeping. Random numbers come from the run's
``numpy.random.Generator`` through :mod:`mlev_es.kernels`.

sep-CMA-ES constants (``n`` = dimension, ``mu_eff = 1 / sum(w_i^2)``)::

    weights   w_i    ~ ln(mu + 1) - ln(i),  i = 1..mu, normalised to sum 1
    c_sigma          = (mu_eff + 2) / (n + mu_eff + 3)
    d_sigma          = 1 + 2 * max(0, sqrt((mu_eff - 1) / (n + 1)) - 1) + c_sigma
    c_c              = 4 / (n + 4)
    mu_cov           = mu_eff
    c_cov (full)     = (1 / mu_cov) * 2 / (n + sqrt(2))^2
                       + (1 - 1 / mu_cov) * min(1, (2 mu_cov - 1) / ((n + 2)^2 + mu_cov))
    c_cov (sep)      = min(1, (n + 2) / 3 * c_cov(full))
    h_sigma threshold: |p_s| / sqrt(1 - (1 - c_sigma)^(2 (g + 1))) < (1.4 + 2 / (n + 1)) * E|N(0, I)|
"""
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import EvaluationError, InvalidDimensionError, NumericalDegeneracyError
from .objectives.base import wrap_periodic

SUCCESS_RULE_C = 0.817
SPHERE_SIGMA_FACTOR = 1.224


def population_sizes(n):
    """Default ``(mu, lambda)``: ``lambda = 4 + floor(3 ln n)``, ``mu = floor(lambda / 2)``."""
    n = int(n)
    if n < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {n}")
    lam = 4 + int(math.floor(3.0 * math.log(n)))
    return lam // 2, lam


def recombination_weights(mu):
    w = math.log(mu + 1) - np.log(np.arange(1, mu + 1))
    return w / w.sum()


def optimal_sphere_sigma(f_value, n):
    """Theoretically optimal (1+1)-ES step size on the sphere, ``1.224 sqrt(f) / n``."""
    return SPHERE_SIGMA_FACTOR * math.sqrt(f_value) / n


def expected_norm(n):
    """Approximation of E|N(0, I_n)|."""
    return math.sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n))


def _checked(f, context):
    f = float(f)
    if not math.isfinite(f):
        raise EvaluationError(f"objective returned non-finite value {f!r}", context)
    return f


# ---------------------------------------------------------------------------
# (1+1)-ES


@dataclass
class OnePlusOneState:
    x: np.ndarray
    sigma: float
    best_f: float
    success_history: deque = None
    mutations_since_adjust: int = 0
    c: float = SUCCESS_RULE_C
    _successes: int = field(default=0, repr=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.success_history is None:
            self.reset_history()
        else:
            self._successes = sum(bool(s) for s in self.success_history)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def window(self):
        return self.success_history.maxlen

    def reset_history(self):
        self.success_history = deque(maxlen=10 * self.n)
        self._successes = 0
        self.mutations_since_adjust = 0

    def record(self, success):
        h = self.success_history
        if len(h) == h.maxlen and h[0]:
            self._successes -= 1
        h.append(bool(success))
        if success:
            self._successes += 1

    @property
    def success_rate(self):
        return self._successes / len(self.success_history) if self.success_history else 0.0

    def adjust_sigma(self):
        """Apply the 1/5th success rule over the current history window."""
        k, m = self._successes, len(self.success_history)
        if m == 0:
            return
        # integer comparison avoids rounding at exactly 1/5
        if 5 * k > m:
            self.sigma /= self.c
        elif 5 * k < m:
            self.sigma *= self.c
        self.mutations_since_adjust = 0


def one_plus_one_init(x0, objective, sigma0):
    x0 = np.asarray(x0, dtype=np.float64)
    f0 = _checked(objective(x0), {"n": x0.shape[0], "sigma": sigma0})
    return OnePlusOneState(x=x0, sigma=float(sigma0), best_f=f0)


def one_plus_one_step(state, objective, rng, periodic=False):
    """One mutation/selection cycle of the elitist (1+1)-ES.

    The offspring replaces the parent when it is not worse; ties count as
    successes. Every ``n`` mutations the step size is adapted from the
    success rate over the last ``10 n`` mutations (fewer early on).

    Returns ``(f_offspring, accepted)``.
    """
    y = state.x + state.sigma * kernels.standard_normal(rng, state.n)
    if periodic:
        y = wrap_periodic(y)
    fy = _checked(objective(y), {"n": state.n, "sigma": state.sigma})
    accepted = fy <= state.best_f
    if accepted:
        state.x = y
        state.best_f = fy
    state.record(accepted)
    state.mutations_since_adjust += 1
    if state.mutations_since_adjust >= state.n:
        state.adjust_sigma()
    return fy, accepted


# ---------------------------------------------------------------------------
# sep-CMA-ES


@dataclass(frozen=True)
class SepCmaParams:
    n: int
    mu: int
    lam: int
    weights: np.ndarray
    mu_eff: float
    c_sigma: float
    d_sigma: float
    c_c: float
    mu_cov: float
    c_cov: float
    chi_n: float

    @classmethod
    def default(cls, n, mu=None, lam=None):
        dmu, dlam = population_sizes(n)
        mu = dmu if mu is None else int(mu)
        lam = dlam if lam is None else int(lam)
        w = recombination_weights(mu)
        mu_eff = 1.0 / float(np.sum(w * w))
        c_sigma = (mu_eff + 2.0) / (n + mu_eff + 3.0)
        d_sigma = 1.0 + 2.0 * max(0.0, math.sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma
        c_c = 4.0 / (n + 4.0)
        mu_cov = mu_eff
        c_cov_full = (1.0 / mu_cov) * 2.0 / (n + math.sqrt(2.0)) ** 2 + (1.0 - 1.0 / mu_cov) * min(
            1.0, (2.0 * mu_cov - 1.0) / ((n + 2.0) ** 2 + mu_cov)
        )
        c_cov = min(1.0, (n + 2.0) / 3.0 * c_cov_full)
        w.setflags(write=False)
        return cls(n, mu, lam, w, mu_eff, c_sigma, d_sigma, c_c, mu_cov, c_cov, expected_norm(n))


@dataclass
class SepCmaState:
    mean: np.ndarray
    sigma: float
    d: np.ndarray
    p_s: np.ndarray
    p_c: np.ndarray
    params: SepCmaParams
    generation: int = 0

    @classmethod
    def create(cls, mean, sigma, d=None):
        mean = np.asarray(mean, dtype=np.float64)
        n = mean.shape[0]
        d = np.ones(n) if d is None else np.asarray(d, dtype=np.float64)
        if d.shape != (n,) or not np.all(d > 0):
            raise ValueError("individual step sizes must be positive and match the mean")
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        return cls(mean, float(sigma), d, np.zeros(n), np.zeros(n), SepCmaParams.default(n))

    @property
    def n(self):
        return self.mean.shape[0]

    @property
    def mu(self):
        return self.params.mu

    @property
    def lam(self):
        return self.params.lam

    @property
    def weights(self):
        return self.params.weights


def sep_cma_step(state, objective, rng, periodic=False, z=None):
    """One generation of (mu_W, lambda)-sep-CMA-ES.

    Offspring are ``mean + (sigma d) z``. ``z`` may be supplied as a
    ``(lambda, n)`` array to replay a generation; otherwise it is drawn from
    ``rng``. For periodic problems the offspring are wrapped before
    evaluation while recombination works on the unwrapped steps, and the
    new mean is wrapped afterwards.

    Returns ``(fitness, order, best_x)`` where ``order`` ranks the offspring
    best-first.
    """
    p = state.params
    n, lam, mu = state.n, p.lam, p.mu
    if z is None:
        z = kernels.standard_normal_matrix(rng, lam, n)
    else:
        z = np.asarray(z, dtype=np.float64).reshape(lam, n)
    # in place: one large temporary instead of two (allocation dominates at n = 1e4)
    x = z * (state.sigma * state.d)
    x += state.mean
    if periodic:
        x = wrap_periodic(x)
    fit = np.empty(lam)
    for k in range(lam):
        fit[k] = _checked(
            objective(x[k]), {"n": n, "sigma": state.sigma, "generation": state.generation}
        )
    order = np.argsort(fit, kind="stable")
    sel = order[:mu]
    w = p.weights
    z_w = w @ z[sel]
    y_w = state.d * z_w

    mean = state.mean + state.sigma * y_w
    state.mean = wrap_periodic(mean) if periodic else mean

    cs = p.c_sigma
    state.p_s = (1.0 - cs) * state.p_s + math.sqrt(cs * (2.0 - cs) * p.mu_eff) * z_w
    ps_norm = float(np.sqrt(np.dot(state.p_s, state.p_s)))
    g = state.generation + 1
    h_sig = ps_norm / math.sqrt(1.0 - (1.0 - cs) ** (2 * g)) < (1.4 + 2.0 / (n + 1.0)) * p.chi_n
    cc = p.c_c
    state.p_c = (1.0 - cc) * state.p_c + (
        math.sqrt(cc * (2.0 - cc) * p.mu_eff) * y_w if h_sig else 0.0
    )
    extra = 0.0 if h_sig else cc * (2.0 - cc)
    c_diag = kernels.sep_cma_diag_update(
        state.d * state.d, state.p_c, z[sel] * state.d, w, p.c_cov, p.mu_cov, extra
    )
    state.sigma *= math.exp((cs / p.d_sigma) * (ps_norm / p.chi_n - 1.0))
    d = np.sqrt(c_diag)
    bad = np.flatnonzero(~(d > 0))
    if bad.size:
        raise NumericalDegeneracyError(
            f"individual step size underflowed at coordinate {int(bad[0])}", coordinate=int(bad[0])
        )
    state.d = d
    state.generation = g
    return fit, order, x[order[0]].copy()
