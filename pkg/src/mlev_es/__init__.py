"""Multi-level evolution strategies with grid upscaling."""
from .framework import (
    FixedBudget,
    FixedTarget,
    LevelSchedule,
    MlevResult,
    Stagnation,
    check_termination,
    level_up,
    run_mlev,
    window_size,
)
from .kernels import BACKEND
from .strategies import (
    OnePlusOneState,
    SepCmaParams,
    SepCmaState,
    one_plus_one_step,
    optimal_sphere_sigma,
    population_sizes,
    sep_cma_step,
)
from .trace import RunTrace
from .upscale import upscale, upscale_cubic, upscale_linear, upscale_nearest

__all__ = [
    "BACKEND",
    "FixedBudget",
    "FixedTarget",
    "LevelSchedule",
    "MlevResult",
    "OnePlusOneState",
    "RunTrace",
    "SepCmaParams",
    "SepCmaState",
    "Stagnation",
    "check_termination",
    "level_up",
    "one_plus_one_step",
    "optimal_sphere_sigma",
    "population_sizes",
    "run_mlev",
    "sep_cma_step",
    "upscale",
    "upscale_cubic",
    "upscale_linear",
    "upscale_nearest",
    "window_size",
]

__version__ = "0.1.0"
