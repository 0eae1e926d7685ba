"""Scattering of one- and two-photon pulses by a one-dimensional two-level atom."""

from .quadrature import (
    ConvergenceError,
    QuadratureSettings,
    adaptive_integrate,
    exp_weighted_tail_integral,
    integrate_on_grid,
    scaled_erfc,
)
from .pulses import (
    CavityParams,
    GaussianPulse,
    OnePhotonField,
    RegimeWarning,
    SpatialGrid,
    TwoPhotonField,
    default_grid,
    effective_gamma,
    evaluate_pulse,
    make_gaussian,
    product_state,
)
from .scattering import (
    OnePhotonDecomposition,
    TwoPhotonDecomposition,
    approx_long_pulse_components,
    nonlinear_delta_at,
    one_photon_output,
    psi_abs_at,
    two_photon_components_oracle,
    two_photon_output,
    two_photon_output_oracle,
)
from .observables import (
    BoundaryError,
    ComponentRatios,
    CrossSection,
    DomainError,
    NoPeakError,
    PeakReport,
    component_ratio_profile,
    cross_section,
    field_norm,
    find_peak,
)

__version__ = "0.1.0"
