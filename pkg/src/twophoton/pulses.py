"""Input pulses, grids and sampled photon fields.

Units are natural throughout: times in 1/Gamma, lengths in c/Gamma.  The
spatial coordinate is co-moving with the light, so a delayed photon shows up
at more negative x.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .quadrature import integrate_on_grid

__all__ = [
    "GaussianPulse",
    "CavityParams",
    "RegimeWarning",
    "SpatialGrid",
    "OnePhotonField",
    "TwoPhotonField",
    "make_gaussian",
    "evaluate_pulse",
    "product_state",
    "effective_gamma",
    "default_grid",
]


@dataclass(frozen=True)
class GaussianPulse:
    """Real Gaussian one-photon wavefunction exp(-(x - center)**2 / T**2) / sqrt(N).

    ``pulse_length`` is T, twice the standard deviation of the photon
    detection-time distribution.
    """

    pulse_length: float
    center: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.pulse_length) and self.pulse_length > 0):
            raise ValueError(f"pulse length must be positive, got {self.pulse_length!r}")
        if not np.isfinite(self.center):
            raise ValueError("pulse center must be finite")

    @property
    def normalization(self) -> float:
        """N = sqrt(pi/2) * T, so that the pulse has unit norm."""
        return math.sqrt(0.5 * math.pi * self.pulse_length**2)

    @property
    def peak_amplitude(self) -> float:
        return 1.0 / math.sqrt(self.normalization)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.pulse_length
        return np.exp(-u * u) / math.sqrt(self.normalization)


def make_gaussian(T: float, center: float = 0.0) -> GaussianPulse:
    return GaussianPulse(float(T), float(center))


def evaluate_pulse(pulse: GaussianPulse, x):
    """Amplitude of ``pulse`` at ``x`` (scalar or array)."""
    out = pulse(x)
    return float(out) if np.ndim(out) == 0 else out


class RegimeWarning(UserWarning):
    """Cavity parameters are outside the bad-cavity ordering kappa >> g >> gamma."""


@dataclass(frozen=True)
class CavityParams:
    kappa: float
    g: float
    gamma_noncavity: float = 0.0


def effective_gamma(params: CavityParams, ratio_threshold: float = 10.0) -> float:
    """Effective dipole relaxation rate g**2 / kappa of a bad-cavity atom.

    Emits a :class:`RegimeWarning` unless ``kappa >= ratio_threshold * g``
    and ``g >= ratio_threshold * gamma_noncavity``.
    """
    if not params.kappa > 0 or not params.g > 0:
        raise ValueError("kappa and g must be positive")
    if params.gamma_noncavity < 0:
        raise ValueError("gamma_noncavity must be non-negative")
    if params.kappa < ratio_threshold * params.g or params.g < ratio_threshold * params.gamma_noncavity:
        warnings.warn(
            f"kappa={params.kappa}, g={params.g}, gamma={params.gamma_noncavity} "
            f"violate kappa >> g >> gamma at ratio {ratio_threshold}",
            RegimeWarning,
            stacklevel=2,
        )
    return params.g**2 / params.kappa


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid with an odd number of points (Simpson compatible)."""

    x_min: float
    x_max: float
    point_count: int

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)) or not self.x_min < self.x_max:
            raise ValueError("grid needs finite x_min < x_max")
        if int(self.point_count) != self.point_count:
            raise ValueError("point_count must be an integer")
        object.__setattr__(self, "point_count", int(self.point_count))
        if self.point_count < 3 or self.point_count % 2 == 0:
            raise ValueError(f"point_count must be odd and >= 3, got {self.point_count}")

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, max_spacing: float) -> "SpatialGrid":
        """Smallest odd-point grid on [x_min, x_max] with spacing <= max_spacing."""
        intervals = math.ceil((x_max - x_min) / max_spacing - 1e-9)
        intervals += intervals % 2
        return cls(float(x_min), float(x_max), max(intervals, 2) + 1)

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.point_count - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.point_count)


def default_grid(T: float) -> SpatialGrid:
    """x in [-(3T + 20), 3T] with spacing at most min(T/40, 0.05).

    The output decays like exp(x) on the delayed (negative) side, hence
    the extra 20 units there.
    """
    if not T > 0:
        raise ValueError("pulse length must be positive")
    return SpatialGrid.from_spacing(-(3.0 * T + 20.0), 3.0 * T, min(T / 40.0, 0.05))


def _frozen_array(values, shape, what):
    arr = np.array(values, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{what} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class OnePhotonField:
    grid: SpatialGrid
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (self.grid.point_count,)
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes, shape, "amplitudes"))

    def __add__(self, other: "OnePhotonField") -> "OnePhotonField":
        return OnePhotonField(self.grid, self.amplitudes + other.amplitudes)

    def norm(self) -> float:
        return float(integrate_on_grid(self.amplitudes**2, self.grid.spacing))


@dataclass(frozen=True)
class TwoPhotonField:
    """Two-photon amplitude matrix; index (i, j) is (x1 = x[i], x2 = x[j]).

    Symmetry is not checked here, since quadrature-based fields carry a
    small residual; see :meth:`symmetry_residual`.
    """

    grid: SpatialGrid
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.grid.point_count
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes, (n, n), "amplitudes"))

    def __add__(self, other: "TwoPhotonField") -> "TwoPhotonField":
        return TwoPhotonField(self.grid, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "TwoPhotonField") -> "TwoPhotonField":
        return TwoPhotonField(self.grid, self.amplitudes - other.amplitudes)

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.amplitudes - self.amplitudes.T)))

    def diagonal(self) -> np.ndarray:
        return np.diag(self.amplitudes).copy()


def product_state(pulse, grid: SpatialGrid) -> TwoPhotonField:
    """Two photons in the same pulse mode: psi(x1) * psi(x2)."""
    a = np.asarray(pulse(grid.points), dtype=float)
    return TwoPhotonField(grid, np.multiply.outer(a, a))
