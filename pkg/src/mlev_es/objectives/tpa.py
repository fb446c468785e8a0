"""Simulated two-photon absorption (TPA) through a dispersive medium.

The shaper applies a pixelated spectral phase to a Gaussian spectrum. The
field picks up the medium's dispersion phase ``k(w)``, the second-order
field is the self-convolution of the first-order one, and the yield is the
integral of its squared modulus. Yields are normalised by the value reached
with the exact compensating phase, so the global maximum is 1.

Frequencies are dimensionless: the fine grid spans ``[-omega_max,
omega_max)`` and the dispersion coefficients are applied in these units.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, GridMismatchError
from .base import TWO_PI, Objective, wrap_periodic

DEFAULT_N_SIM = 2 ** 15
DEFAULT_OMEGA_MAX = 0.012
EDGE_AMPLITUDE = 0.01


@dataclass(frozen=True)
class TpaProfile:
    name: str
    k2: float
    k3: float
    k4: float


PROFILES = {
    "tpa-0": TpaProfile("tpa-0", 0.0, 0.0, 0.0),
    "tpa-1": TpaProfile("tpa-1", 5000.0, 0.0, 0.0),
    "tpa-2": TpaProfile("tpa-2", 11300.0, 7990.0, 2530.0),
    "tpa-3": TpaProfile("tpa-3", 50000.0, 25000.0, 10500.0),
}


def get_profile(name):
    try:
        return PROFILES[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown TPA profile {name!r}; choose from {sorted(PROFILES)}") from None


def dispersion_k(omega, profile):
    """Dispersion phase ``k2 w^2 + k3 w^3 + k4 w^4``."""
    w = np.asarray(omega, dtype=np.float64)
    w2 = w * w
    return profile.k2 * w2 + profile.k3 * w2 * w + profile.k4 * w2 * w2


@dataclass(frozen=True)
class SpectralGrid:
    """Fine simulation grid with a Gaussian spectral amplitude.

    ``omega[k] = (k - n_sim/2) * delta`` so that ``omega = 0`` is a grid point.
    The amplitude drops to ``edge_amplitude`` at ``|omega| = omega_max``.
    """

    n_sim: int = DEFAULT_N_SIM
    omega_max: float = DEFAULT_OMEGA_MAX
    edge_amplitude: float = EDGE_AMPLITUDE
    omega: np.ndarray = field(init=False, repr=False, compare=False)
    amplitude: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = int(self.n_sim)
        if n < 2 or n & (n - 1):
            raise ConfigError(f"n_sim must be a power of two >= 2, got {self.n_sim}")
        if not self.omega_max > 0:
            raise ConfigError("omega_max must be positive")
        if not 0 < self.edge_amplitude < 1:
            raise ConfigError("edge_amplitude must lie in (0, 1)")
        delta = self.omega_max / (n // 2)
        omega = (np.arange(n) - n // 2) * delta
        width = self.omega_max / math.sqrt(-2.0 * math.log(self.edge_amplitude))
        amplitude = np.exp(-0.5 * (omega / width) ** 2)
        omega.setflags(write=False)
        amplitude.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "amplitude", amplitude)

    @property
    def delta(self):
        return self.omega_max / (self.n_sim // 2)

    def block_size(self, n_pixels):
        if n_pixels < 1 or self.n_sim % n_pixels:
            raise GridMismatchError(
                f"{n_pixels} pixels do not tile a fine grid of {self.n_sim} points"
            )
        return self.n_sim // n_pixels

    def pixel_centers(self, n_pixels):
        """Mean fine-grid frequency of each pixel block."""
        b = self.block_size(n_pixels)
        return self.omega.reshape(n_pixels, b).mean(axis=1)


def staircase_expand(phi_pixels, grid):
    """Hold each pixel's phase over its contiguous block of fine-grid points."""
    phi = np.asarray(phi_pixels, dtype=np.float64)
    if isinstance(grid, SpectralGrid):
        b = grid.block_size(phi.shape[0])
    else:
        n_sim = int(grid)
        if phi.shape[0] < 1 or n_sim % phi.shape[0]:
            raise GridMismatchError(f"{phi.shape[0]} pixels do not tile {n_sim} points")
        b = n_sim // phi.shape[0]
    return np.repeat(phi, b)


def compensating_phase(profile, grid, n_pixels):
    """``-k(w) mod 2*pi`` at the pixel-centre frequencies."""
    return wrap_periodic(-dispersion_k(grid.pixel_centers(n_pixels), profile))


def self_convolve(e):
    """Full linear self-convolution (length ``2n - 1``) through the FFT."""
    n = e.shape[0]
    size = 1 << (2 * n - 1).bit_length()
    spec = np.fft.fft(e, size)
    return np.fft.ifft(spec * spec)[: 2 * n - 1]


def _medium_field(grid, profile=None):
    """``A(w) exp(i k(w))``: the field without the shaper phase."""
    if profile is None:
        return grid.amplitude.astype(np.complex128)
    return grid.amplitude * np.exp(1j * dispersion_k(grid.omega, profile))


def _first_order_field(phi_pixels, medium, grid):
    # exp(i phi) once per pixel, then held over its block: the same staircase
    # with n_pixels exponentials instead of n_sim
    phi = np.asarray(phi_pixels, dtype=np.float64)
    return np.repeat(np.exp(1j * phi), grid.block_size(phi.shape[0])) * medium


def tpa_yield(phi_pixels, profile, grid):
    """Unnormalised TPA yield: trapezoid integral of ``|E1 * E1|^2``."""
    e1 = _first_order_field(phi_pixels, _medium_field(grid, profile), grid)
    i2 = np.abs(self_convolve(e1)) ** 2
    return _trapezoid(i2, grid.delta)


def temporal_field(phi_pixels, grid, profile=None):
    """Time-domain envelope of the shaped first-order field.

    Returns ``(t, e)`` with ``t = 0`` at index ``n_sim // 2``. Pixelated phases
    produce replica pulses spaced by ``2*pi / (pixel width)``.
    """
    e1 = _first_order_field(phi_pixels, _medium_field(grid, profile), grid)
    e = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(e1)))
    n = grid.n_sim
    t = (np.arange(n) - n // 2) * (TWO_PI / (n * grid.delta))
    return t, e


def write_temporal_csv(path, t, e):
    data = np.column_stack([t, np.abs(e) ** 2])
    np.savetxt(path, data, delimiter=",", header="t,intensity", comments="")


class TPA(Objective):
    """Normalised TPA objective, minimised as ``1 - f_TPA``.

    ``normalized(phi)`` returns ``f_TPA`` itself; calling the instance returns
    the minimisation value and counts the evaluation.
    """

    periodic = True
    init_low = 0.0
    init_high = TWO_PI
    default_sigma0 = TWO_PI / 3.0

    def __init__(self, profile, grid=None, counter=None):
        super().__init__(counter)
        if isinstance(profile, str):
            profile = get_profile(profile)
        self.profile = profile
        self.grid = grid if grid is not None else SpectralGrid()
        self.name = profile.name
        self._medium = _medium_field(self.grid, profile)
        self._medium.setflags(write=False)
        self.f_max = tpa_yield(
            compensating_phase(profile, self.grid, self.grid.n_sim), profile, self.grid
        )

    def validate_dim(self, n):
        self.grid.block_size(n)

    def random_init(self, rng, n):
        # half-open so that draws already satisfy the wrapped-domain invariant
        return wrap_periodic(rng.uniform(0.0, TWO_PI, size=n))

    def normalized(self, phi_pixels):
        if self.grid is None:
            raise ConfigError("spectral grid not initialised")
        e1 = _first_order_field(phi_pixels, self._medium, self.grid)
        i2 = np.abs(self_convolve(e1)) ** 2
        return _trapezoid(i2, self.grid.delta) / self.f_max

    def _evaluate(self, x):
        return 1.0 - self.normalized(x)


def _trapezoid(y, dx):
    return float(dx * (y.sum() - 0.5 * (y[0] + y[-1])))


def tpa_eval(phi_pixels, profile, grid, counter=None):
    """Normalised yield ``f_TPA`` in ``[0, 1]`` (maximisation form)."""
    obj = _cached_tpa(profile, grid)
    if counter is not None:
        counter.increment()
    return obj.normalized(phi_pixels)


_CACHE = {}


def _cached_tpa(profile, grid):
    key = (profile, grid.n_sim, grid.omega_max, grid.edge_amplitude)
    obj = _CACHE.get(key)
    if obj is None:
        obj = _CACHE[key] = TPA(profile, grid)
    return obj
