from .base import TWO_PI, EvalCounter, Objective, wrap_periodic
from .sphere import Sphere, sphere, sphere_eval
from .tpa import (
    PROFILES,
    TPA,
    SpectralGrid,
    TpaProfile,
    compensating_phase,
    dispersion_k,
    get_profile,
    self_convolve,
    staircase_expand,
    temporal_field,
    tpa_eval,
    tpa_yield,
    write_temporal_csv,
)


__all__ = [
    "EvalCounter",
    "Objective",
    "PROFILES",
    "SpectralGrid",
    "Sphere",
    "TPA",
    "TWO_PI",
    "TpaProfile",
    "compensating_phase",
    "dispersion_k",
    "get_profile",
    "make_objective",
    "self_convolve",
    "sphere",
    "sphere_eval",
    "staircase_expand",
    "temporal_field",
    "tpa_eval",
    "tpa_yield",
    "wrap_periodic",
    "write_temporal_csv",
]


def make_objective(problem, n_sim=None, omega_max=None, counter=None):
    """Build an objective from its config name (``sphere`` or ``tpa-0`` .. ``tpa-3``)."""
    problem = problem.lower()
    if problem == "sphere":
        return Sphere(counter=counter)
    kwargs = {}
    if n_sim is not None:
        kwargs["n_sim"] = int(n_sim)
    if omega_max is not None:
        kwargs["omega_max"] = float(omega_max)
    return TPA(get_profile(problem), SpectralGrid(**kwargs), counter=counter)
