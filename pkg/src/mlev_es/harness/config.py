"""Experiment configuration files.

A config is an INI file with a single ``[experiment]`` section of flat
``key = value`` pairs named after :class:`ExperimentConfig` fields. Empty
values fall back to the defaults.
"""
import configparser
import os
from dataclasses import asdict, dataclass, fields
from typing import Optional

from ..errors import ConfigError, InterpolationError
from ..framework import FixedBudget, FixedTarget, LevelSchedule, Stagnation, normalize_strategy
from ..objectives import PROFILES, TWO_PI
from ..upscale import get_operator

SECTION = "experiment"
OUTPUT_ENV = "MLEV_ES_OUTPUT_DIR"
PROBLEMS = ("sphere",) + tuple(sorted(PROFILES))


@dataclass
class ExperimentConfig:
    problem: str = "sphere"
    strategy: str = "1p1"
    mode: str = "mlev"
    operator: str = "U-1"
    n_initial: Optional[int] = None
    n_final: Optional[int] = None
    n_direct: Optional[int] = None
    tc: str = "target"
    epsilon: Optional[float] = 0.05
    theta: Optional[float] = None
    level_budget: Optional[int] = None
    budget_unit: str = "auto"
    sigma0: Optional[float] = None
    repetitions: int = 30
    base_seed: int = 0
    global_budget: Optional[int] = None
    n_sim: Optional[int] = None
    omega_max: Optional[float] = None
    trace_stride: int = 1
    label: Optional[str] = None
    output_dir: Optional[str] = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        self.problem = str(self.problem).lower()
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        self.strategy = normalize_strategy(self.strategy)
        self.mode = str(self.mode).lower()
        if self.mode not in ("direct", "mlev"):
            raise ConfigError("mode must be 'direct' or 'mlev'")
        try:
            self.operator = get_operator(self.operator)
        except InterpolationError as exc:
            raise ConfigError(str(exc)) from None
        if self.mode == "direct":
            if not self.n_direct:
                raise ConfigError("mode=direct requires n_direct")
        elif not (self.n_initial and self.n_final):
            raise ConfigError("mode=mlev requires n_initial and n_final")
        self.tc = str(self.tc).lower()
        if self.tc not in ("target", "stagnation", "budget"):
            raise ConfigError("tc must be 'target', 'stagnation' or 'budget'")
        if self.tc == "target" and not (self.epsilon and self.epsilon > 0):
            raise ConfigError("tc=target requires epsilon > 0")
        if self.tc == "stagnation" and not (self.theta and self.theta > 0):
            raise ConfigError("tc=stagnation requires theta > 0")
        if self.tc == "budget" and not (self.level_budget and self.level_budget > 0):
            raise ConfigError("tc=budget requires level_budget > 0")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.trace_stride < 1:
            raise ConfigError("trace_stride must be >= 1")
        if self.sigma0 is not None and not self.sigma0 > 0:
            raise ConfigError("sigma0 must be positive")
        if self.global_budget is not None and self.global_budget < 1:
            raise ConfigError("global_budget must be positive")
        try:
            self.schedule()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    # derived -----------------------------------------------------------

    @property
    def name(self):
        if self.label:
            return self.label
        if self.mode == "direct":
            return f"{self.problem}-direct-{self.strategy}-N{self.n_direct}-{self.tc}"
        return f"{self.problem}-mlev-{self.strategy}-{self.operator}-{self.tc}"

    @property
    def effective_sigma0(self):
        if self.sigma0 is not None:
            return self.sigma0
        return 10.0 / 3.0 if self.problem == "sphere" else TWO_PI / 3.0

    def schedule(self):
        if self.mode == "direct":
            return LevelSchedule(self.n_direct, self.n_direct)
        return LevelSchedule(self.n_initial, self.n_final)

    def criterion(self):
        if self.tc == "target":
            return FixedTarget(self.epsilon)
        if self.tc == "stagnation":
            return Stagnation(self.theta)
        return FixedBudget(self.level_budget, self.budget_unit)

    def to_dict(self):
        return asdict(self)

    def replace(self, **changes):
        d = self.to_dict()
        d.update({k: v for k, v in changes.items() if v is not None})
        return ExperimentConfig(**d)


_CASTS = {}
for _f in fields(ExperimentConfig):
    t = str(_f.type)
    if "int" in t:
        _CASTS[_f.name] = int
    elif "float" in t:
        _CASTS[_f.name] = float
    else:
        _CASTS[_f.name] = str


def _cast(key, raw):
    raw = raw.strip()
    if raw == "" or raw.lower() == "none":
        return None
    cast = _CASTS[key]
    try:
        if cast is int:
            # allow 1e4 style values for dimensions and budgets
            v = float(raw)
            if not v.is_integer():
                raise ValueError
            return int(v)
        return cast(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def load_config(path):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not parser.has_section(SECTION):
        raise ConfigError(f"{path}: missing [{SECTION}] section")
    values = {}
    for key, raw in parser.items(SECTION):
        if key not in _CASTS:
            raise ConfigError(f"{path}: unknown key {key!r}")
        v = _cast(key, raw)
        if v is not None:
            values[key] = v
    return ExperimentConfig(**values)


def dump_config(config, path):
    parser = configparser.ConfigParser(interpolation=None)
    parser[SECTION] = {k: "" if v is None else str(v) for k, v in config.to_dict().items()}
    with open(path, "w") as fh:
        parser.write(fh)


def default_output_root():
    return os.environ.get(OUTPUT_ENV, "results")
