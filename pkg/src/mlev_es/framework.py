"""Multi-level driver: solve on a coarse grid, upscale, repeat on finer grids."""
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, InvalidDimensionError
from .objectives.base import wrap_periodic
from .strategies import (
    OnePlusOneState,
    SepCmaParams,
    SepCmaState,
    one_plus_one_step,
    optimal_sphere_sigma,
    sep_cma_step,
)
from .trace import RunTrace
from .upscale import get_operator, upscale

STRATEGIES = ("1p1", "sepC")

TARGET_HIT = "target-hit"
STAGNATED = "stagnated"
BUDGET_EXHAUSTED = "budget-exhausted"
LEVEL_BUDGET = "level-budget"


def normalize_strategy(name):
    key = str(name).strip().lower().replace("-", "").replace("_", "").replace("+", "p")
    if key in ("1p1", "oneplusone", "1p1es"):
        return "1p1"
    if key in ("sepc", "sepcma", "sepcmaes"):
        return "sepC"
    raise ConfigError(f"unknown strategy {name!r}; expected one of {STRATEGIES}")


# ---------------------------------------------------------------------------
# schedule and termination


@dataclass(frozen=True)
class LevelSchedule:
    """Grid sizes ``N_i, 2 N_i, 4 N_i, ...`` up to ``N_f``.

    When ``N_f`` is not ``N_i`` times a power of two the last doubling is
    replaced by a jump to ``N_f`` (e.g. 10 -> ... -> 5120 -> 10000); pass
    ``strict=True`` to reject such schedules instead.
    """

    initial_dim: int
    final_dim: int
    ratio: int = 2
    strict: bool = False

    def __post_init__(self):
        if self.initial_dim < 1:
            raise InvalidDimensionError("initial dimension must be >= 1")
        if self.final_dim < self.initial_dim:
            raise InvalidDimensionError("final dimension must be >= initial dimension")
        if self.ratio != 2:
            raise ConfigError("only a doubling schedule is supported")
        if self.strict and not self.exact:
            raise ConfigError(
                f"N_f={self.final_dim} is not N_i={self.initial_dim} times a power of two"
            )

    @property
    def exact(self):
        q, r = divmod(self.final_dim, self.initial_dim)
        return r == 0 and q & (q - 1) == 0

    @property
    def dims(self):
        out = [self.initial_dim]
        while out[-1] * self.ratio <= self.final_dim:
            out.append(out[-1] * self.ratio)
        if out[-1] != self.final_dim:
            out.append(self.final_dim)
        return tuple(out)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)


@dataclass(frozen=True)
class FixedBudget:
    """tc-0: a fixed allotment per level.

    ``unit='auto'`` counts generations for sep-CMA and evaluations for the
    (1+1)-ES.
    """

    budget: int
    unit: str = "auto"

    def __post_init__(self):
        if self.budget < 1:
            raise ConfigError("per-level budget must be positive")
        if self.unit not in ("auto", "evaluations", "generations"):
            raise ConfigError(f"unknown budget unit {self.unit!r}")


@dataclass(frozen=True)
class FixedTarget:
    """tc-1: stop the level once the selected value is at most ``epsilon``."""

    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")


def default_window_rule(strategy):
    strategy = normalize_strategy(strategy)

    def rule(n, lam=None):
        if lam is None:
            lam = SepCmaParams.default(n).lam
        return window_size(strategy, n, lam)

    return rule


@dataclass(frozen=True)
class Stagnation:
    """tc-2: stop once the range of the last ``w`` selected values is at most ``theta``.

    ``window_rule(n, lam)`` gives ``w``; when omitted, the defaults
    ``ceil(100 log10 n)`` (1+1) and ``ceil(lam log10 n)`` (sep-CMA) apply.
    """

    theta: float
    window_rule: Optional[Callable] = None

    def __post_init__(self):
        if not self.theta > 0:
            raise ConfigError("theta must be positive")

    def window(self, strategy, n, lam=None):
        rule = self.window_rule or default_window_rule(strategy)
        w = int(rule(n, lam))
        return max(w, 2)


def window_size(strategy, n, lam=None):
    """Stagnation window length at grid size ``n``."""
    strategy = normalize_strategy(strategy)
    if n < 2:
        raise InvalidDimensionError("window size needs n >= 2")
    if strategy == "1p1":
        return int(math.ceil(100.0 * math.log10(n)))
    if lam is None:
        lam = SepCmaParams.default(n).lam
    return int(math.ceil(lam * math.log10(n)))


def check_termination(recent_values, tc, evals_this_level=0, n=None, window=None):
    """Whether the current level is finished.

    ``recent_values`` holds the selected objective values of the level, most
    recent last. For :class:`Stagnation` the window must be full; ``window``
    defaults to the length of ``recent_values``. ``evals_this_level`` is
    measured in the unit the :class:`FixedBudget` counts.
    """
    if isinstance(tc, FixedBudget):
        return evals_this_level >= tc.budget
    values = list(recent_values)
    if not values:
        return False
    if isinstance(tc, FixedTarget):
        return values[-1] <= tc.epsilon
    if isinstance(tc, Stagnation):
        w = len(values) if window is None else int(window)
        if len(values) < w or w < 2:
            return False
        tail = values[-w:]
        return max(tail) - min(tail) <= tc.theta
    raise ConfigError(f"unknown termination criterion {tc!r}")


# ---------------------------------------------------------------------------
# level-up


def level_up(state, n_next, operator, periodic=False, x=None):
    """Carry a strategy state to grid size ``n_next``.

    The decision vector (``x`` if given, else the state's own point) and,
    for sep-CMA, the individual step sizes are upscaled with ``operator``;
    the global step size shrinks by ``sqrt(n_next / n)``; evolution paths,
    generation counter and the (1+1) success window are reset.
    """
    n = state.n
    if n_next < n:
        raise InvalidDimensionError(f"cannot level up from {n} to {n_next}")
    op = get_operator(operator)
    factor = math.sqrt(2.0) if n_next == 2 * n else math.sqrt(n_next / n)
    if isinstance(state, OnePlusOneState):
        src = state.x if x is None else x
        new_x = upscale(src, n_next, op)
        if periodic:
            new_x = wrap_periodic(new_x)
        new = OnePlusOneState(x=new_x, sigma=state.sigma / factor, best_f=math.inf, c=state.c)
        return new
    if isinstance(state, SepCmaState):
        src = state.mean if x is None else x
        new_mean = upscale(src, n_next, op)
        if periodic:
            new_mean = wrap_periodic(new_mean)
        new_d = upscale(state.d, n_next, op)
        new = SepCmaState.create(new_mean, state.sigma / factor, new_d)
        return new
    raise TypeError(f"unsupported strategy state {type(state).__name__}")


# ---------------------------------------------------------------------------
# driver


class _BudgetExhausted(Exception):
    pass


class _Tracked:
    """Objective wrapper that enforces the global budget and writes the trace."""

    def __init__(self, objective, trace, budget):
        self.objective = objective
        self.trace = trace
        self.budget = budget
        self.count = 0
        self.level = 0
        self.n = 0
        self.sigma = math.nan
        self.best_f = math.inf
        self.best_x = None
        self.sphere = bool(getattr(objective, "has_sigma_star", False))

    def start_level(self, level, n):
        self.level = level
        self.n = n
        self.best_f = math.inf
        self.best_x = None
        self.trace.mark_level(level, n, self.count + 1)

    def __call__(self, x):
        if self.budget is not None and self.count >= self.budget:
            raise _BudgetExhausted
        f = self.objective(x)
        self.count += 1
        if f < self.best_f:
            self.best_f = float(f)
            self.best_x = np.array(x, dtype=np.float64, copy=True)
        sigma_star = optimal_sphere_sigma(max(self.best_f, 0.0), self.n) if self.sphere else math.nan
        self.trace.append(self.count, f, self.best_f, self.sigma, sigma_star, self.level, self.n)
        return f


@dataclass
class MlevResult:
    minimizer: np.ndarray
    final_f: float
    total_evaluations: int
    per_level_evaluations: list
    trace: RunTrace
    status: str
    dims: list = field(default_factory=list)
    final_sigma: float = math.nan
    completed_levels: int = 0

    @property
    def budget_exhausted(self):
        return self.status == BUDGET_EXHAUSTED

    @property
    def success(self):
        return self.status in (TARGET_HIT, STAGNATED, LEVEL_BUDGET)


def run_mlev(
    model,
    schedule,
    tc,
    strategy="1p1",
    operator="U-1",
    seed=None,
    global_budget=None,
    sigma0=None,
    final_tc=None,
    trace_stride=1,
    x0=None,
):
    """Run a multi-level evolution strategy.

    Parameters
    ----------
    model : Objective
        Problem model; must accept vectors of every size in the schedule.
    schedule : LevelSchedule or sequence of int
        Grid sizes, coarse to fine. A single size gives a direct run.
    tc : FixedBudget, FixedTarget or Stagnation
        Per-level termination criterion. ``final_tc`` overrides it on the
        last level.
    strategy : {"1p1", "sepC"}
    operator : {"U-1", "U-2", "U-3"}
    seed : int
        Seed of the run's ``numpy.random.Generator`` (PCG64).
    global_budget : int, optional
        Hard cap on objective calls for the whole run.
    sigma0 : float, optional
        Initial global step size; defaults to ``model.default_sigma0``.

    Returns
    -------
    MlevResult
    """
    strategy = normalize_strategy(strategy)
    operator = get_operator(operator)
    dims = list(schedule.dims if isinstance(schedule, LevelSchedule) else schedule)
    if not dims or any(b <= a for a, b in zip(dims, dims[1:])):
        raise ConfigError(f"schedule must be strictly increasing, got {dims}")
    for n in dims:
        model.validate_dim(n)
    periodic = bool(getattr(model, "periodic", False))
    sigma0 = float(model.default_sigma0 if sigma0 is None else sigma0)
    rng = np.random.default_rng(seed)

    trace = RunTrace(stride=trace_stride)
    tracked = _Tracked(model, trace, global_budget)
    per_level = []
    status = None
    state = None
    minimizer, final_f = None, math.inf

    try:
        for level, n in enumerate(dims, start=1):
            level_tc = final_tc if (final_tc is not None and level == len(dims)) else tc
            start = tracked.count
            tracked.start_level(level, n)
            if level == 1:
                seed_x = np.asarray(model.random_init(rng, n) if x0 is None else x0, dtype=np.float64)
                state = (
                    OnePlusOneState(x=seed_x, sigma=sigma0, best_f=math.inf)
                    if strategy == "1p1"
                    else SepCmaState.create(seed_x, sigma0)
                )
            else:
                state = level_up(state, n, operator, periodic, x=minimizer)
            try:
                status = _solve_level(state, strategy, tracked, rng, level_tc, periodic)
            finally:
                per_level.append(tracked.count - start)
            minimizer, final_f = tracked.best_x, tracked.best_f
    except _BudgetExhausted:
        status = BUDGET_EXHAUSTED
        if tracked.best_x is not None:
            minimizer, final_f = tracked.best_x, tracked.best_f
    trace.finish(status)
    return MlevResult(
        minimizer=minimizer,
        final_f=float(final_f),
        total_evaluations=tracked.count,
        per_level_evaluations=per_level,
        trace=trace,
        status=status,
        dims=dims[: len(per_level)],
        final_sigma=float(state.sigma) if state is not None else math.nan,
        completed_levels=len(per_level) - (status == BUDGET_EXHAUSTED),
    )


def _solve_level(state, strategy, tracked, rng, tc, periodic):
    n = state.n
    if isinstance(tc, Stagnation):
        lam = state.lam if strategy == "sepC" else None
        window = tc.window(strategy, n, lam)
    else:
        window = 1
    recent = deque(maxlen=window)
    tracked.sigma = state.sigma

    # seed evaluation: x0 is assessed before any mutation
    seed_x = state.x if strategy == "1p1" else state.mean
    f0 = tracked(seed_x)
    if strategy == "1p1":
        state.best_f = f0
    recent.append(f0)
    steps = 0
    if _done(recent, tc, steps, window):
        return _reason(tc)

    if strategy == "1p1":
        unit_counts_evals = True
        while True:
            tracked.sigma = state.sigma
            one_plus_one_step(state, tracked, rng, periodic)
            steps += 1
            recent.append(state.best_f)
            if _done(recent, tc, steps, window):
                return _reason(tc)
    else:
        unit_counts_evals = isinstance(tc, FixedBudget) and tc.unit == "evaluations"
        while True:
            tracked.sigma = state.sigma
            fit, order, _ = sep_cma_step(state, tracked, rng, periodic)
            steps += state.lam if unit_counts_evals else 1
            recent.append(float(fit[order[0]]))
            if _done(recent, tc, steps, window):
                return _reason(tc)


def _done(recent, tc, steps, window):
    return check_termination(recent, tc, steps, window=window)


def _reason(tc):
    if isinstance(tc, FixedTarget):
        return TARGET_HIT
    if isinstance(tc, Stagnation):
        return STAGNATED
    return LEVEL_BUDGET
