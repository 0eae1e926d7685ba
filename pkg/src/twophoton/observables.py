"""Cross-sections, peaks, delays, ratios and norms of photon fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from .pulses import OnePhotonField, TwoPhotonField
from .quadrature import _segment_integral, integrate_on_grid

__all__ = [
    "CrossSection",
    "PeakReport",
    "ComponentRatios",
    "DomainError",
    "BoundaryError",
    "NoPeakError",
    "cross_section",
    "find_peak",
    "field_norm",
    "component_ratio_profile",
]

# below this fraction of the reference peak a slice counts as having no peak
NO_PEAK_FRACTION = 0.1


class DomainError(ValueError):
    """The requested slice does not intersect the grid."""


class BoundaryError(ValueError):
    """The extremum sits on the edge of the sampled range."""


class NoPeakError(ValueError):
    """The section is too small relative to its reference to define a peak."""


@dataclass(frozen=True)
class CrossSection:
    """Slice psi(x1, x1 + tau) parametrized by the mean position (x1 + x2) / 2."""

    tau: float
    mean_positions: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.mean_positions, dtype=float)
        a = np.asarray(self.amplitudes, dtype=float)
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if s.shape != a.shape or s.ndim != 1:
            raise ValueError("mean_positions and amplitudes must be 1-D of equal length")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(a))):
            raise ValueError("cross-section contains non-finite values")
        object.__setattr__(self, "mean_positions", s)
        object.__setattr__(self, "amplitudes", a)

    def scaled(self, k: float) -> "CrossSection":
        return CrossSection(self.tau, self.mean_positions, k * self.amplitudes)


@dataclass(frozen=True)
class PeakReport:
    peak_position: float
    peak_value: float
    delay: float
    ratio_to_reference: Optional[float] = None


def cross_section(fld: TwoPhotonField, tau: float) -> CrossSection:
    """Sample ``fld`` along x2 = x1 + tau with bilinear interpolation.

    x1 runs over the grid points for which x1 + tau stays inside the grid.
    """
    tau = float(tau)
    if not tau >= 0:
        raise DomainError("tau must be non-negative")
    grid = fld.grid
    x = grid.points
    h = grid.spacing
    keep = x + tau <= grid.x_max + 1e-12 * h
    if keep.sum() < 1:
        raise DomainError(f"line x2 = x1 + {tau} misses the grid [{grid.x_min}, {grid.x_max}]")
    i = np.nonzero(keep)[0]
    # x2 = x[i] + tau = x[j] + frac * h
    pos = (x[i] + tau - grid.x_min) / h
    nearest = np.round(pos)
    pos = np.where(np.abs(pos - nearest) < 1e-9, nearest, pos)
    j = np.clip(np.floor(pos).astype(int), 0, grid.point_count - 1)
    frac = pos - j
    j1 = np.minimum(j + 1, grid.point_count - 1)
    amps = fld.amplitudes
    # x1 is on the grid, so bilinear reduces to linear along x2
    vals = (1.0 - frac) * amps[i, j] + frac * amps[i, j1]
    return CrossSection(tau, x[i] + 0.5 * tau, vals)


def _refine(section: CrossSection):
    a = section.amplitudes
    s = section.mean_positions
    mag = np.abs(a)
    k = int(np.argmax(mag))
    if k == 0 or k == len(a) - 1:
        raise BoundaryError("extremum at the edge of the section; enlarge the grid")
    y0, y1, y2 = mag[k - 1], mag[k], mag[k + 1]
    h = s[1] - s[0]
    curv = y0 - 2.0 * y1 + y2
    d = 0.0 if curv == 0 else 0.5 * (y0 - y2) / curv
    position = float(s[k] + d * h)
    magnitude = float(y1 - 0.25 * (y0 - y2) * d)
    return position, float(np.sign(a[k])) * magnitude


def find_peak(section: CrossSection, reference: Optional[CrossSection] = None) -> PeakReport:
    """Extremum of |amplitude| refined by a 3-point parabola.

    The sign comes from the grid sample at the extremum.  With a
    ``reference`` the ratio of the refined peak values is reported, and a
    section whose largest magnitude is below 10% of the reference peak
    raises :class:`NoPeakError`.
    """
    if len(section.amplitudes) < 3:
        raise ValueError("need at least 3 samples")
    ratio = None
    if reference is not None:
        _, ref_value = _refine(reference)
        if np.max(np.abs(section.amplitudes)) < NO_PEAK_FRACTION * abs(ref_value):
            raise NoPeakError(
                f"section at tau={section.tau} is below {NO_PEAK_FRACTION:.0%} of the reference peak"
            )
    position, value = _refine(section)
    if reference is not None:
        ratio = value / ref_value
    return PeakReport(position, value, -position, ratio)


def field_norm(fld: Union[OnePhotonField, TwoPhotonField]) -> float:
    """Integral of |psi|**2 by composite Simpson.

    Two-photon amplitudes have a kink along x1 = x2 (the nonlinear term
    depends on |x1 - x2|), so each row is integrated separately on either
    side of the diagonal.
    """
    h = fld.grid.spacing
    if isinstance(fld, OnePhotonField):
        return float(integrate_on_grid(fld.amplitudes**2, h))
    sq = fld.amplitudes**2
    n = sq.shape[0]
    rows = np.empty(n)
    for i in range(n):
        rows[i] = _segment_integral(sq[i, : i + 1], h) + _segment_integral(sq[i, i:], h)
    return float(integrate_on_grid(rows, h))


@dataclass(frozen=True)
class ComponentRatios:
    """Peak ratios of the decomposition components against psi1 at one tau.

    ``peaks`` holds the refined peak of each component, or ``None`` when
    the component has no resolvable peak; its ratio is then the signed
    largest sample divided by the psi1 peak.
    """

    tau: float
    reference: PeakReport
    ratios: Dict[str, float]
    peaks: Dict[str, Optional[PeakReport]]


def component_ratio_profile(decomp, tau: float) -> ComponentRatios:
    ref_section = cross_section(decomp.psi1, tau)
    ref = find_peak(ref_section)
    ratios = {}
    peaks = {}
    for name in ("psi2", "psi3", "total"):
        section = cross_section(getattr(decomp, name), tau)
        try:
            pk = find_peak(section, ref_section)
            ratios[name] = pk.ratio_to_reference
            peaks[name] = pk
        except NoPeakError:
            k = int(np.argmax(np.abs(section.amplitudes)))
            ratios[name] = float(section.amplitudes[k] / ref.peak_value)
            peaks[name] = None
    return ComponentRatios(float(tau), ref, ratios, peaks)
