"""Weak values of photon arrival time with exact finite-width pointer statistics.

A photon is split by polarization into two path-length-shifted Gaussian
envelopes; conditioning on a polarization post-selection makes the
conditional mean arrival a weak value that can leave the interval [0, eps]
entirely.  The package provides the closed forms, an independent quadrature
oracle, the entangled-pair generalization with correlated divergent values,
and seeded Monte Carlo realizations of both experiments.
"""

from .bell import (
    BellSetup,
    JointArrivalOperator,
    JointWeakResult,
    bell_conditional_wave,
    bell_evolution_state,
    bell_post_state,
    bell_weak_arrivals,
    closed_form_moments,
    first_order_weak_arrival,
    post_select,
    quadrature_moments,
)
from .errors import (
    DegenerateAngle,
    GammaSingular,
    InsufficientSamples,
    OrthogonalSelection,
    UndefinedConditioning,
    WeakArrivalError,
)
from .montecarlo import (
    BellRunReport,
    RunConfig,
    RunReport,
    histogram_csv,
    report_to_json,
    run_bell,
    run_single_photon,
    sample_arrival,
)
from .pointer import (
    GammaForm,
    PointerWave,
    density,
    exact_mean_arrival,
    final_pointer_state,
    gamma_form,
    pointer_from_gamma,
    quadrature_mean,
    weak_norm_mean_arrival,
)
from .polarization import (
    PolarizationState,
    TwoPhotonState,
    bell_phi_plus,
    inner,
    product_state,
)
from .weakvalue import (
    Apparatus,
    WeakResult,
    abl_mean_arrival,
    abl_probabilities,
    arrival_operator,
    sigma_from_linewidth,
    weak_arrival,
    weak_arrival_delta_approx,
    weak_value,
)

__version__ = "0.1.0"

__all__ = [
    "Apparatus",
    "BellRunReport",
    "BellSetup",
    "DegenerateAngle",
    "GammaForm",
    "GammaSingular",
    "InsufficientSamples",
    "JointArrivalOperator",
    "JointWeakResult",
    "OrthogonalSelection",
    "PointerWave",
    "PolarizationState",
    "RunConfig",
    "RunReport",
    "TwoPhotonState",
    "UndefinedConditioning",
    "WeakArrivalError",
    "WeakResult",
    "abl_mean_arrival",
    "abl_probabilities",
    "arrival_operator",
    "bell_conditional_wave",
    "bell_evolution_state",
    "bell_phi_plus",
    "bell_post_state",
    "bell_weak_arrivals",
    "closed_form_moments",
    "density",
    "exact_mean_arrival",
    "final_pointer_state",
    "first_order_weak_arrival",
    "gamma_form",
    "histogram_csv",
    "inner",
    "pointer_from_gamma",
    "post_select",
    "product_state",
    "quadrature_mean",
    "quadrature_moments",
    "report_to_json",
    "run_bell",
    "run_single_photon",
    "sample_arrival",
    "sigma_from_linewidth",
    "weak_arrival",
    "weak_arrival_delta_approx",
    "weak_norm_mean_arrival",
    "weak_value",
]
