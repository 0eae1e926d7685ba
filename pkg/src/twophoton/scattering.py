"""Output wavefunctions of one and two photons scattered by a one-dimensional atom.

The one-photon propagator in natural units is

    u(x; x') = delta(x - x') - 2 exp(-(x' - x))    for x <= x', else 0,

i.e. a transmitted part (the delta) plus an absorption/re-emission part with
memory time 1.  For two photons the propagator is the product of two
one-photon propagators plus a non-factorizable correction

    du(x1, x2; x1', x2') = -4 exp(-(x1' + x2' - x1 - x2))    for x1, x2 <= min(x1', x2'),

which expresses that the saturated atom cannot hold two excitations.

Two evaluation routes are provided.  The fast route is specific to product
inputs of a Gaussian pulse: the absorption integral has a closed form in
terms of erfcx, and the correction term collapses to
``-exp(-|x1 - x2|) * psi_abs(max(x1, x2))**2``.  The oracle route applies the
kernels to an arbitrary two-photon input by nested adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .pulses import GaussianPulse, OnePhotonField, SpatialGrid, TwoPhotonField
from .quadrature import (
    QuadratureSettings,
    adaptive_integrate,
    exp_weighted_tail_integral,
    scaled_erfc,
)

__all__ = [
    "OnePhotonDecomposition",
    "TwoPhotonDecomposition",
    "psi_abs_at",
    "one_photon_output",
    "nonlinear_delta_at",
    "two_photon_output",
    "two_photon_output_oracle",
    "two_photon_components_oracle",
    "approx_long_pulse_components",
]


@dataclass(frozen=True)
class OnePhotonDecomposition:
    """Transmitted (``prop``) and absorbed/re-emitted (``abs``) parts of the output."""

    prop: OnePhotonField
    abs: OnePhotonField
    total: OnePhotonField


@dataclass(frozen=True)
class TwoPhotonDecomposition:
    """Process decomposition of the two-photon output.

    psi1: both photons transmitted.  psi2: one transmitted, one absorbed.
    psi3: both absorbed, including ``nonlinear_delta``.
    """

    psi1: TwoPhotonField
    psi2: TwoPhotonField
    psi3: TwoPhotonField
    nonlinear_delta: TwoPhotonField
    total: TwoPhotonField

    @property
    def grid(self) -> SpatialGrid:
        return self.total.grid

    def linear_part(self) -> TwoPhotonField:
        """Output without the nonlinear correction (independent photons)."""
        return self.total - self.nonlinear_delta


def _gaussian_tail_factor(x, T):
    """exp(x + T**2/4) * erfc(x/T + T/2), computed without overflow.

    For a non-negative erfc argument z this equals exp(-x**2/T**2) * erfcx(z);
    for negative z, erfc(z) = 2 - erfc(-z) gives
    2 exp(x + T**2/4) - exp(-x**2/T**2) * erfcx(-z).
    """
    x = np.asarray(x, dtype=float)
    z = x / T + 0.5 * T
    gauss = np.exp(-(x / T) ** 2)
    pos = z >= 0
    out = np.empty(np.broadcast(x, z).shape)
    out[pos] = gauss[pos] * scaled_erfc(z[pos])
    neg = ~pos
    out[neg] = 2.0 * np.exp(x[neg] + 0.25 * T * T) - gauss[neg] * scaled_erfc(-z[neg])
    return out


def psi_abs_at(
    pulse: GaussianPulse,
    x,
    settings: Optional[QuadratureSettings] = None,
    method: str = "closed",
):
    """Absorption/re-emission amplitude -2 * int_x^inf exp(-(s - x)) psi(s) ds.

    ``method="closed"`` uses the erfcx expression (Gaussian pulses only);
    ``method="quadrature"`` integrates numerically with ``settings`` and
    works for any vectorized callable ``pulse``.
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if method == "closed":
        if not isinstance(pulse, GaussianPulse):
            raise TypeError("closed form needs a GaussianPulse; use method='quadrature'")
        T = pulse.pulse_length
        pref = -T * math.sqrt(math.pi) / math.sqrt(pulse.normalization)
        out = pref * _gaussian_tail_factor(x - pulse.center, T)
    elif method == "quadrature":
        hint = [pulse.center] if isinstance(pulse, GaussianPulse) else None
        out = np.array([
            -2.0 * exp_weighted_tail_integral(pulse, xi, 1.0, settings, points=hint) for xi in x
        ])
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out[0]) if scalar else out


def one_photon_output(pulse: GaussianPulse, grid: SpatialGrid) -> OnePhotonDecomposition:
    x = grid.points
    prop = np.asarray(pulse(x), dtype=float)
    absorbed = psi_abs_at(pulse, x)
    return OnePhotonDecomposition(
        prop=OnePhotonField(grid, prop),
        abs=OnePhotonField(grid, absorbed),
        total=OnePhotonField(grid, prop + absorbed),
    )


def nonlinear_delta_at(pulse: GaussianPulse, x1, x2, settings: Optional[QuadratureSettings] = None):
    """Contribution of the nonlinear kernel for a product input, always <= 0.

    Equal to -4 exp(x1 + x2) [int_M^inf exp(-s) psi(s) ds]**2 with
    M = max(x1, x2); written as -exp(-|x1 - x2|) psi_abs(M)**2 for stability.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    m = np.maximum(x1, x2)
    a = psi_abs_at(pulse, m, settings)
    out = -np.exp(-np.abs(x1 - x2)) * a * a
    return float(out) if np.ndim(out) == 0 else out


def two_photon_output(pulse: GaussianPulse, grid: SpatialGrid) -> TwoPhotonDecomposition:
    """Fast evaluation of the two-photon output for the product input pulse x pulse."""
    x = grid.points
    a = np.asarray(pulse(x), dtype=float)
    b = psi_abs_at(pulse, x)
    n = len(x)

    idx = np.arange(n)
    # M = max(x1, x2) on a sorted grid is the point with the larger index
    b_at_max = b[np.maximum(idx[:, None], idx[None, :])]
    delta = -np.exp(-np.abs(x[:, None] - x[None, :])) * (b_at_max * b_at_max)

    psi1 = np.multiply.outer(a, a)
    psi2 = np.multiply.outer(a, b) + np.multiply.outer(b, a)
    psi3 = np.multiply.outer(b, b) + delta
    total = psi1 + psi2 + psi3
    return TwoPhotonDecomposition(
        psi1=TwoPhotonField(grid, psi1),
        psi2=TwoPhotonField(grid, psi2),
        psi3=TwoPhotonField(grid, psi3),
        nonlinear_delta=TwoPhotonField(grid, delta),
        total=TwoPhotonField(grid, total),
    )


def two_photon_components_oracle(
    pulse: Optional[Callable] = None,
    grid: Optional[SpatialGrid] = None,
    settings: Optional[QuadratureSettings] = None,
    input_state: Optional[Callable] = None,
) -> TwoPhotonDecomposition:
    """Apply the two-photon kernels to an input state by direct quadrature.

    ``input_state(x1, x2)`` is any vectorized two-photon amplitude; by
    default it is ``pulse(x1) * pulse(x2)``.  No factorization of the
    input is used: every kernel region is integrated as a (nested)
    integral over the input state.  With substitutions x' = x + v the
    regions become [0, inf) in each variable:

        psi2  = -2 int_0^inf e^-v [in(x1, x2 + v) + in(x1 + v, x2)] dv
        absabs = 4 int int e^-(u+v) in(x1 + u, x2 + v) du dv
        delta = -4 e^-(2M - x1 - x2) int int e^-(u+v) in(M + u, M + v) du dv

    All grid points are integrated together as one vector-valued integrand.
    Intended for coarse grids.
    """
    if grid is None:
        raise ValueError("grid is required")
    if input_state is None:
        if pulse is None:
            raise ValueError("give either pulse or input_state")

        def input_state(p, q):
            return pulse(p) * pulse(q)

    settings = settings or QuadratureSettings()
    x = grid.points
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    x1 = X1.ravel()
    x2 = X2.ravel()
    m = np.maximum(x1, x2)
    shift = np.exp(-(2.0 * m - x1 - x2))
    upper = settings.tail_cutoff_exponent

    psi1 = np.asarray(input_state(x1, x2), dtype=float)

    def single(v):
        w = np.exp(-v)[:, None]
        vv = v[:, None]
        return np.concatenate(
            [w * input_state(x1[None, :], x2[None, :] + vv),
             w * input_state(x1[None, :] + vv, x2[None, :])],
            axis=1,
        )

    s = adaptive_integrate(single, 0.0, upper, settings)
    npts = x1.size
    psi2 = -2.0 * (s[:npts] + s[npts:])

    def outer(u):
        def inner(v):
            # shape (len(v), len(u), 2 * npts): [abs-abs | delta] stacked so
            # both use identical panels and cancel exactly on the diagonal
            w = 4.0 * np.exp(-(v[:, None] + u[None, :]))[:, :, None]
            uu = u[None, :, None]
            vv = v[:, None, None]
            aa = w * input_state(x1 + uu, x2 + vv)
            dd = -(w * input_state(m + uu, m + vv)) * shift
            return np.concatenate([aa, dd], axis=2)

        return adaptive_integrate(inner, 0.0, upper, settings)

    both = adaptive_integrate(outer, 0.0, upper, settings)
    absabs = both[:npts]
    delta = both[npts:]

    n = grid.point_count

    def field(v):
        return TwoPhotonField(grid, np.asarray(v).reshape(n, n))

    psi3 = absabs + delta
    total = psi1 + psi2 + psi3
    return TwoPhotonDecomposition(
        psi1=field(psi1),
        psi2=field(psi2),
        psi3=field(psi3),
        nonlinear_delta=field(delta),
        total=field(total),
    )


def two_photon_output_oracle(
    pulse: Optional[Callable],
    grid: SpatialGrid,
    settings: Optional[QuadratureSettings] = None,
    input_state: Optional[Callable] = None,
) -> TwoPhotonField:
    """Total two-photon output by direct quadrature; see :func:`two_photon_components_oracle`."""
    return two_photon_components_oracle(pulse, grid, settings, input_state).total


def approx_long_pulse_components(pulse: GaussianPulse, grid: SpatialGrid) -> TwoPhotonDecomposition:
    """Shifted-Gaussian approximations valid for pulses much longer than 1.

    psi2 ~ -4 psi(x1 + 1/2) psi(x2 + 1/2) and
    psi3 ~ 4 psi(x1 + 1) psi(x2 + 1) (1 - exp(-|x1 - x2|)).
    Only meant as a comparison for the exact result.
    """
    x = grid.points
    a = pulse(x)
    half = pulse(x + 0.5)
    one = pulse(x + 1.0)
    psi1 = np.multiply.outer(a, a)
    psi2 = -4.0 * np.multiply.outer(half, half)
    absabs = 4.0 * np.multiply.outer(one, one)
    decay = np.exp(-np.abs(x[:, None] - x[None, :]))
    delta = -absabs * decay
    psi3 = absabs * (1.0 - decay)
    return TwoPhotonDecomposition(
        psi1=TwoPhotonField(grid, psi1),
        psi2=TwoPhotonField(grid, psi2),
        psi3=TwoPhotonField(grid, psi3),
        nonlinear_delta=TwoPhotonField(grid, delta),
        total=TwoPhotonField(grid, psi1 + psi2 + psi3),
    )
