"""Weak values of the photon arrival time and the ideal-measurement baseline.

The measured quantity is the relative arrival time of the vertical
polarization component, encoded by the operator eps*|V><V| (horizontal
arrival is the reference).  Conditioned on pre-selection at angle theta and
post-selection at angle phi, the weak value is

    A_w = eps * sin(phi) sin(theta) / (cos(phi) cos(theta) + sin(phi) sin(theta))

which can lie far outside [0, eps] near orthogonal selections.  The
ideal-measurement (projective) baseline for the same conditioning is the
two-outcome conditional probability rule implemented by
:func:`abl_probabilities`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAngle, OrthogonalSelection, UndefinedConditioning
from .polarization import PolarizationState, hermitian_dot, inner

#: Overlaps below this magnitude count as orthogonal selection.
ORTHOGONALITY_TOL = 1e-14


@dataclass(frozen=True)
class Apparatus:
    """Delay-circuit parameters.

    theta, phi : radians
        Pre- and post-selection polarizer angles.
    epsilon : length
        Path-length difference between the V and H arms (arrival-time
        separation is epsilon/c).
    sigma : length
        Width of the Gaussian envelope in the arrival coordinate.
    c : speed
        Propagation speed; only used to convert lengths to times.
    weak_threshold, strong_threshold : dimensionless
        Regime boundaries on epsilon/sigma.  Below `weak_threshold` the
        pointer overlap exp(-eps^2/4 sigma^2) exceeds 0.9975, within 0.25%
        of the weak limit.
    """

    theta: float
    phi: float
    epsilon: float
    sigma: float
    c: float = 1.0
    weak_threshold: float = 0.1
    strong_threshold: float = 2.0

    def __post_init__(self):
        for name in ("theta", "phi", "epsilon", "sigma", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.c <= 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if not 0 < self.weak_threshold <= self.strong_threshold:
            raise ValueError("need 0 < weak_threshold <= strong_threshold")

    @property
    def weak_ratio(self) -> float:
        return self.epsilon / self.sigma

    def regime(self) -> str:
        r = self.weak_ratio
        if r < self.weak_threshold:
            return "weak"
        if r >= self.strong_threshold:
            return "strong"
        return "intermediate"

    def pre_state(self) -> PolarizationState:
        return PolarizationState.from_angle(self.theta)

    def post_state(self) -> PolarizationState:
        return PolarizationState.from_angle(self.phi)


@dataclass(frozen=True)
class WeakResult:
    """A weak value together with its post-selection success probability."""

    value: complex
    probability: float
    regime_note: str

    def __post_init__(self):
        if not -1e-12 <= self.probability <= 1 + 1e-12:
            raise ValueError(f"probability {self.probability} outside [0, 1]")


def arrival_operator(epsilon: float) -> np.ndarray:
    """Relative-arrival-time observable eps*|V><V| as a 2x2 matrix."""
    if not math.isfinite(epsilon):
        raise ValueError(f"epsilon must be finite, got {epsilon!r}")
    return np.array([[0.0, 0.0], [0.0, epsilon]], dtype=complex)


def weak_value(
    pre: PolarizationState,
    post: PolarizationState,
    op: np.ndarray,
    overlap_tol: float = ORTHOGONALITY_TOL,
) -> complex:
    """Weak value <post|op|pre> / <post|pre>.

    Raises :class:`OrthogonalSelection` when the overlap magnitude is below
    `overlap_tol`; the divergent orthogonal case carries no preferred sign.
    """
    ov = inner(post, pre)
    if abs(ov) <= overlap_tol:
        raise OrthogonalSelection(abs(ov))
    num = hermitian_dot(post.as_array(), op @ pre.as_array())
    return num / ov


def weak_arrival(app: Apparatus) -> WeakResult:
    """Closed-form weak arrival time for the apparatus, with probability.

    The probability is the weak-limit post-selection probability
    cos^2(theta - phi); the finite-width probability is the pointer-state
    norm (see the pointer module).  Both are reported by the CLI and never
    averaged.
    """
    cos_t, sin_t = math.cos(app.theta), math.sin(app.theta)
    cos_p, sin_p = math.cos(app.phi), math.sin(app.phi)
    denom = cos_p * cos_t + sin_p * sin_t
    if abs(denom) <= ORTHOGONALITY_TOL:
        raise OrthogonalSelection(abs(denom))
    value = sin_p * (app.epsilon * sin_t) / denom
    return WeakResult(
        value=complex(value),
        probability=denom * denom,
        regime_note=app.regime(),
    )


def weak_arrival_delta_approx(theta: float, delta: float, epsilon: float) -> float:
    """First-order approximation near orthogonal selection phi = theta - pi/2 - delta.

    Returns eps * (tan(theta) + 1/delta) / (tan(theta) + cot(theta)).
    """
    if delta == 0.0 or not math.isfinite(delta):
        raise ValueError(f"delta must be finite and nonzero, got {delta!r}")
    if abs(math.sin(2.0 * theta)) < 1e-12:
        raise DegenerateAngle(
            f"tan/cot diverge at theta={theta} (multiple of pi/2)"
        )
    tan_t = math.tan(theta)
    return epsilon * (tan_t + 1.0 / delta) / (tan_t + 1.0 / tan_t)


def abl_probabilities(
    pre: PolarizationState, post: PolarizationState
) -> tuple[float, float]:
    """Conditional outcome probabilities of an ideal intermediate H/V measurement.

    prob(a_j) = |<post|a_j><a_j|pre>|^2 / sum_k |<post|a_k><a_k|pre>|^2,
    with free evolution taken as identity (propagation is carried entirely
    by the arrival coordinate).
    """
    w_h = abs(post.amp_h.conjugate() * pre.amp_h) ** 2
    w_v = abs(post.amp_v.conjugate() * pre.amp_v) ** 2
    total = w_h + w_v
    if total <= 0.0:
        raise UndefinedConditioning(
            "both intermediate outcomes have zero amplitude for this pre/post pair"
        )
    return w_h / total, w_v / total


def abl_mean_arrival(
    pre: PolarizationState, post: PolarizationState, epsilon: float
) -> float:
    """Eigenvalue-weighted mean 0*prob_H + eps*prob_V of the ideal measurement."""
    _, p_v = abl_probabilities(pre, post)
    return epsilon * p_v


def sigma_from_linewidth(delta_nu: float, c: float = 1.0) -> float:
    """Envelope width from the frequency uncertainty: sigma = c / (4 pi delta_nu)."""
    if not delta_nu > 0:
        raise ValueError(f"delta_nu must be > 0, got {delta_nu!r}")
    if not c > 0:
        raise ValueError(f"c must be > 0, got {c!r}")
    return c / (4.0 * math.pi * delta_nu)
