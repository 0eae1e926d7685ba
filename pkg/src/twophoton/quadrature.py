"""Numerical integration primitives.

Everything here works in natural units (rates in units of the dipole
relaxation rate, lengths in units of c over that rate).  Two kinds of
integrals show up in the scattering code:

* integrals of sampled data on a uniform grid (norms), handled by
  composite Simpson weights, and
* semi-infinite integrals with an exponential memory kernel, handled by an
  adaptive Gauss-Kronrod (7/15) bisection on a truncated interval.

The adaptive integrator accepts vector-valued integrands so that many
related integrals (one per grid point) can share a single set of panels.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

__all__ = [
    "QuadratureSettings",
    "ConvergenceError",
    "integrate_on_grid",
    "adaptive_integrate",
    "exp_weighted_tail_integral",
    "scaled_erfc",
]


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and budgets for the adaptive integrators.

    ``tail_cutoff_exponent`` sets where a semi-infinite integral with
    weight ``exp(-rate * (s - lower))`` is truncated: at
    ``lower + tail_cutoff_exponent / rate`` the weight has dropped below
    ``exp(-tail_cutoff_exponent)``.
    """

    relative_tolerance: float = 1e-10
    absolute_tolerance: float = 1e-12
    tail_cutoff_exponent: float = 32.0
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.relative_tolerance > 0:
            raise ValueError("relative_tolerance must be positive")
        if not self.absolute_tolerance > 0:
            raise ValueError("absolute_tolerance must be positive")
        if not self.tail_cutoff_exponent >= 20:
            raise ValueError("tail_cutoff_exponent must be at least 20")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")


class ConvergenceError(RuntimeError):
    """Adaptive integration ran out of subdivisions before meeting tolerance.

    The best available ``estimate`` and its ``error_bound`` are attached.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


def _simpson_weights(n: int) -> np.ndarray:
    """Unit-spacing weights for n samples (n >= 3).

    Odd n: plain composite Simpson.  Even n: Simpson on the first n - 3
    samples followed by Simpson's 3/8 rule on the last four.
    """
    w = np.zeros(n)
    m = n if n % 2 == 1 else n - 3
    if m >= 3:
        w[:m:2] = 2.0
        w[1:m:2] = 4.0
        w[0] = w[m - 1] = 1.0
        w[:m] /= 3.0
    if n % 2 == 0:
        tail = np.array([3.0, 9.0, 9.0, 3.0]) / 8.0
        w[n - 4:] += tail
    return w


def _segment_integral(values: np.ndarray, spacing: float) -> float:
    # Like integrate_on_grid but tolerant of 1- and 2-point segments.
    n = values.shape[-1]
    if n < 2:
        return 0.0 * values.sum(axis=-1)
    if n == 2:
        return 0.5 * spacing * (values[..., 0] + values[..., 1])
    return spacing * (values @ _simpson_weights(n))


def integrate_on_grid(values, spacing: float, axis: int = -1):
    """Composite Simpson integral of uniformly spaced samples.

    Parameters
    ----------
    values : array_like
        Samples, at least 3 along ``axis``.
    spacing : float
        Grid spacing, must be positive.
    axis : int
        Axis to integrate over.

    Returns
    -------
    float or ndarray
        The integral (array if ``values`` has more than one dimension).
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 0 or values.shape[axis] < 3:
        raise ValueError("integrate_on_grid needs at least 3 samples")
    if not spacing > 0:
        raise ValueError("spacing must be positive")
    values = np.moveaxis(values, axis, -1)
    return spacing * (values @ _simpson_weights(values.shape[-1]))


def scaled_erfc(z):
    """exp(z**2) * erfc(z), finite for large positive z."""
    return special.erfcx(z)


# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (positive half).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[1:7:2] = _WG[:3]
_GAUSS[9:14:2] = _WG[2::-1]
_GAUSS[7] = _WG[3]


def _eval_panels(f, lefts, rights):
    """Kronrod estimates and error estimates for a batch of panels."""
    lefts = np.asarray(lefts, dtype=float)
    rights = np.asarray(rights, dtype=float)
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    nodes = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    vals = np.asarray(f(nodes), dtype=float)
    if vals.ndim == 0:
        vals = np.broadcast_to(vals, nodes.shape)
    vals = vals.reshape((len(lefts), 15) + vals.shape[1:])
    kron = np.tensordot(_KRONROD, vals, axes=([0], [1]))
    gauss = np.tensordot(_GAUSS, vals, axes=([0], [1]))
    scale = half.reshape((-1,) + (1,) * (kron.ndim - 1))
    kron = kron * scale
    err = np.abs(kron - gauss * scale)
    return kron, err


def adaptive_integrate(
    f: Callable,
    a: float,
    b: float,
    settings: Optional[QuadratureSettings] = None,
    points: Optional[Sequence[float]] = None,
    initial_panels: int = 8,
):
    """Adaptive Gauss-Kronrod integration of ``f`` over ``[a, b]``.

    ``f`` is called with a 1-D array of nodes and must return an array whose
    leading axis matches the nodes; trailing axes make the integrand
    vector-valued, and every component must meet the tolerance.  Panels are
    bisected worst-first.  ``points`` are extra breakpoints inside ``[a, b]``.

    Returns the integral (float, or array for vector integrands).
    """
    settings = settings or QuadratureSettings()
    a = float(a)
    b = float(b)
    if a == b:
        probe = np.asarray(f(np.array([a])), dtype=float)
        return 0.0 if probe.ndim <= 1 else np.zeros(probe.shape[1:])

    edges = np.linspace(a, b, initial_panels + 1)
    if points is not None:
        inner = [p for p in points if min(a, b) < p < max(a, b)]
        edges = np.unique(np.concatenate([edges, inner]))
        if b < a:
            edges = edges[::-1]
    # one panel per call keeps nested vector integrands small
    evaluated = [_eval_panels(f, [lo], [hi]) for lo, hi in zip(edges[:-1], edges[1:])]
    values = np.concatenate([v for v, _ in evaluated])
    errors = np.concatenate([e for _, e in evaluated])

    # heap entries: (-priority, left, right, index into store)
    store = []
    heap = []
    for k in range(len(edges) - 1):
        store.append((values[k], errors[k]))
        heapq.heappush(heap, (-float(np.max(errors[k])), float(edges[k]), float(edges[k + 1]), k))
    total = np.sum(values, axis=0)
    total_err = np.sum(errors, axis=0)

    splits = 0
    while True:
        tol = np.maximum(settings.absolute_tolerance, settings.relative_tolerance * np.abs(total))
        if np.all(total_err <= tol):
            break
        if splits >= settings.max_subdivisions:
            raise ConvergenceError(
                f"no convergence after {splits} subdivisions",
                _ordered_sum(heap, store),
                total_err,
            )
        _, left, right, idx = heapq.heappop(heap)
        old_val, old_err = store[idx]
        mid = 0.5 * (left + right)
        if not (min(left, right) < mid < max(left, right)):
            raise ConvergenceError(
                "panel width reached floating point resolution",
                _ordered_sum(heap + [(0.0, left, right, idx)], store),
                total_err,
            )
        (v0, e0), (v1, e1) = _eval_panels(f, [left], [mid]), _eval_panels(f, [mid], [right])
        vals = (v0[0], v1[0])
        errs = (e0[0], e1[0])
        total = total - old_val + vals[0] + vals[1]
        total_err = total_err - old_err + errs[0] + errs[1]
        for (lo, hi), v, e in zip(((left, mid), (mid, right)), vals, errs):
            store.append((v, e))
            heapq.heappush(heap, (-float(np.max(e)), lo, hi, len(store) - 1))
        splits += 1

    result = _ordered_sum(heap, store)
    return float(result) if np.ndim(result) == 0 else result


def _ordered_sum(heap, store):
    # Re-sum left to right so the result does not depend on the update history.
    ordered = sorted(heap, key=lambda item: item[1])
    return np.sum(np.stack([store[item[3]][0] for item in ordered]), axis=0)


def exp_weighted_tail_integral(
    f: Callable,
    lower: float,
    rate: float,
    settings: Optional[QuadratureSettings] = None,
    points: Optional[Sequence[float]] = None,
):
    """Integral of ``exp(-rate * (s - lower)) * f(s)`` for s from ``lower`` to infinity.

    ``f`` must be vectorized and bounded.  The range is cut where the
    exponential weight falls below ``exp(-settings.tail_cutoff_exponent)``,
    so the truncation error is at most that factor times ``sup|f| / rate``.
    """
    if not rate > 0:
        raise ValueError("rate must be positive")
    settings = settings or QuadratureSettings()
    lower = float(lower)
    upper = lower + settings.tail_cutoff_exponent / rate

    def integrand(s):
        vals = np.asarray(f(s), dtype=float)
        if vals.ndim == 0:
            vals = np.broadcast_to(vals, s.shape)
        w = np.exp(-rate * (s - lower))
        return w.reshape(w.shape + (1,) * (vals.ndim - 1)) * vals

    return adaptive_integrate(integrand, lower, upper, settings, points=points)
