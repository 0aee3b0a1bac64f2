"""Correlated weak arrival times for an entangled photon pair.

Each photon of a (|HH> + |VV>)/sqrt(2) pair traverses its own delay
circuit; post-selection is on a product state at angles theta and
theta + pi/2 + delta.  As delta -> 0 the joint weak arrival times diverge
identically in both arms while the success probability falls as delta^2,
and every successful post-selection is shared by both stations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, NamedTuple

import numpy as np

from .errors import OrthogonalSelection, UndefinedConditioning
from .polarization import (
    TWO_PHOTON_BASIS,
    PolarizationState,
    TwoPhotonState,
    bell_phi_plus,
    inner,
    product_state,
)
from .pointer import WINDOW_SIGMAS, PointerWave

Expansion = Literal["exact", "first_order"]


@dataclass(frozen=True)
class BellSetup:
    """Parameters of the two-station experiment."""

    theta: float
    delta: float
    epsilon: float
    sigma: float

    def __post_init__(self):
        for name in ("theta", "delta", "epsilon", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class JointArrivalOperator:
    """Diagonal two-photon observable assigning an arrival-time 2-vector per basis label.

    HH is the shared reference (0, 0); a V component delays the
    corresponding photon by epsilon.
    """

    epsilon: float

    def arrival_times(self, label: str) -> tuple[float, float]:
        eps = self.epsilon
        return {
            "HH": (0.0, 0.0),
            "HV": (0.0, eps),
            "VH": (eps, 0.0),
            "VV": (eps, eps),
        }[label]


@dataclass(frozen=True)
class JointWeakResult:
    """Weak arrival times of both photons with the joint success probability."""

    value: tuple[complex, complex]
    probability: float
    correlated: bool

    def __post_init__(self):
        if not -1e-12 <= self.probability <= 1 + 1e-12:
            raise ValueError(f"probability {self.probability} outside [0, 1]")


def bell_post_state(
    theta: float, delta: float, expansion: Expansion = "exact"
) -> TwoPhotonState:
    """Product post-selection at angles theta and theta + pi/2 + delta.

    `exact` uses the true product of the two polarizer states; `first_order`
    truncates the second factor at O(delta).
    """
    if expansion == "exact":
        return product_state(
            PolarizationState.from_angle(theta),
            PolarizationState.from_angle(theta + 0.5 * math.pi + delta),
        )
    if expansion == "first_order":
        sin_t, cos_t = math.sin(theta), math.cos(theta)
        return TwoPhotonState(
            complex(-sin_t * cos_t - delta * cos_t * cos_t),
            complex(cos_t * cos_t - delta * sin_t * cos_t),
            complex(-sin_t * sin_t - delta * sin_t * cos_t),
            complex(sin_t * cos_t - delta * sin_t * sin_t),
        )
    raise ValueError(f"expansion must be 'exact' or 'first_order', got {expansion!r}")


def bell_weak_arrivals(
    theta: float,
    delta: float,
    epsilon: float,
    expansion: Expansion = "exact",
) -> JointWeakResult:
    """Joint weak values <post|A|pre> / <post|pre> for the pair, componentwise.

    With the first-order post-selection this equals
    (sin^2(theta) - sin(theta) cos(theta) / delta) * (eps, eps); both
    components are identical for every parameter choice.
    """
    pre = bell_phi_plus()
    post = bell_post_state(theta, delta, expansion)
    op = JointArrivalOperator(epsilon)
    ov = inner(post, pre)
    if abs(ov) == 0.0:
        raise OrthogonalSelection(abs(ov))
    num = [0.0 + 0.0j, 0.0 + 0.0j]
    for label in TWO_PHOTON_BASIS:
        weight = post.amplitude(label).conjugate() * pre.amplitude(label)
        t1, t2 = op.arrival_times(label)
        num[0] += weight * t1
        num[1] += weight * t2
    v1, v2 = num[0] / ov, num[1] / ov
    correlated = abs(v1 - v2) <= 1e-12 * max(1.0, abs(v1))
    return JointWeakResult(
        value=(v1, v2), probability=abs(ov) ** 2, correlated=correlated
    )


def first_order_weak_arrival(theta: float, delta: float, epsilon: float) -> float:
    """Closed form sin^2(theta) - sin(theta) cos(theta) / delta, times epsilon."""
    if delta == 0.0:
        raise OrthogonalSelection(0.0)
    sin_t, cos_t = math.sin(theta), math.cos(theta)
    return epsilon * (sin_t * sin_t - sin_t * cos_t / delta)


@dataclass(frozen=True)
class TwoPhotonPointerState:
    """Labeled product-Gaussian terms: coeff * G(y1-c1) G(y2-c2) |label>."""

    terms: tuple[tuple[str, complex, float, float], ...]
    sigma: float

    def norm_sq(self) -> float:
        total = 0.0 + 0.0j
        for lab_j, c_j, a_j, b_j in self.terms:
            for lab_k, c_k, a_k, b_k in self.terms:
                if lab_j == lab_k:
                    total += (
                        c_j.conjugate()
                        * c_k
                        * _overlap(a_j - a_k, self.sigma)
                        * _overlap(b_j - b_k, self.sigma)
                    )
        return float(total.real)

    def labels(self) -> set[str]:
        return {lab for lab, *_ in self.terms}


@dataclass(frozen=True)
class TwoPhotonPointerWave:
    """Post-selected (scalar) joint pointer wave: sum of product-Gaussian terms."""

    terms: tuple[tuple[complex, float, float], ...]
    sigma: float

    def amplitude(self, y1, y2):
        y1 = np.asarray(y1, dtype=float)
        y2 = np.asarray(y2, dtype=float)
        pref = (self.sigma**2 * math.pi) ** -0.5
        total = np.zeros(np.broadcast(y1, y2).shape, dtype=complex)
        two_s2 = 2.0 * self.sigma**2
        for coeff, c1, c2 in self.terms:
            total += (
                coeff
                * pref
                * np.exp(-((y1 - c1) ** 2) / two_s2 - ((y2 - c2) ** 2) / two_s2)
            )
        return total

    def density(self, y1, y2):
        return np.abs(self.amplitude(y1, y2)) ** 2

    def norm_sq(self) -> float:
        total = 0.0 + 0.0j
        for c_j, a_j, b_j in self.terms:
            for c_k, a_k, b_k in self.terms:
                total += (
                    c_j.conjugate()
                    * c_k
                    * _overlap(a_j - a_k, self.sigma)
                    * _overlap(b_j - b_k, self.sigma)
                )
        return float(total.real)

    def marginal_density(self, y, axis: int = 0):
        """Unnormalized marginal of |psi|^2 along one coordinate."""
        y = np.asarray(y, dtype=float)
        pref = (self.sigma**2 * math.pi) ** -0.5
        s2 = self.sigma**2
        total = np.zeros(y.shape, dtype=float)
        for c_j, a_j, b_j in self.terms:
            for c_k, a_k, b_k in self.terms:
                if axis == 0:
                    own_j, own_k, other = a_j, a_k, _overlap(b_j - b_k, self.sigma)
                else:
                    own_j, own_k, other = b_j, b_k, _overlap(a_j - a_k, self.sigma)
                w = (c_j.conjugate() * c_k).real * other
                if w != 0.0:
                    mid = 0.5 * (own_j + own_k)
                    w *= _overlap(own_j - own_k, self.sigma)
                    total += w * pref * np.exp(-((y - mid) ** 2) / s2)
        return total

    def conditional_wave(self, y1: float) -> PointerWave:
        """One-dimensional pointer wave of y2 given y1 (unnormalized)."""
        pref = (self.sigma**2 * math.pi) ** -0.25
        terms = tuple(
            (
                coeff
                * pref
                * math.exp(-((y1 - c1) ** 2) / (2.0 * self.sigma**2)),
                c2,
            )
            for coeff, c1, c2 in self.terms
        )
        return PointerWave(terms=terms, sigma=self.sigma)

    def window(self, axis: int, pad: float = WINDOW_SIGMAS) -> tuple[float, float]:
        centers = [t[1 + axis] for t in self.terms]
        return min(centers) - pad * self.sigma, max(centers) + pad * self.sigma


def _overlap(separation: float, sigma: float) -> float:
    return math.exp(-(separation**2) / (4.0 * sigma**2))


def bell_evolution_state(epsilon: float, sigma: float) -> TwoPhotonPointerState:
    """Pair state after both delay circuits: HH at (0, 0), VV at (eps, eps)."""
    r = complex(1.0 / math.sqrt(2.0))
    return TwoPhotonPointerState(
        terms=(("HH", r, 0.0, 0.0), ("VV", r, epsilon, epsilon)), sigma=sigma
    )


def post_select(
    state: TwoPhotonPointerState, post: TwoPhotonState
) -> TwoPhotonPointerWave:
    """Project the labeled state onto a polarization post-selection."""
    terms = tuple(
        (post.amplitude(label).conjugate() * coeff, c1, c2)
        for label, coeff, c1, c2 in state.terms
    )
    return TwoPhotonPointerWave(terms=terms, sigma=state.sigma)


def bell_conditional_wave(setup: BellSetup) -> TwoPhotonPointerWave:
    """Joint pointer wave after exact-angle post-selection of the pair."""
    return post_select(
        bell_evolution_state(setup.epsilon, setup.sigma),
        bell_post_state(setup.theta, setup.delta, "exact"),
    )


class JointMoments(NamedTuple):
    norm_sq: float
    mean1: float
    mean2: float
    var1: float
    var2: float
    cov: float
    corr: float


def closed_form_moments(wave: TwoPhotonPointerWave) -> JointMoments:
    """First and second conditional moments of (y1, y2) in closed form.

    Each pair of terms contributes a product Gaussian centered at the
    midpoint of the two centers with per-coordinate variance sigma^2/2.
    """
    s2 = 0.5 * wave.sigma**2
    m = e1 = e2 = e11 = e22 = e12 = 0.0
    for c_j, a_j, b_j in wave.terms:
        for c_k, a_k, b_k in wave.terms:
            w = (
                (c_j.conjugate() * c_k).real
                * _overlap(a_j - a_k, wave.sigma)
                * _overlap(b_j - b_k, wave.sigma)
            )
            m1 = 0.5 * (a_j + a_k)
            m2 = 0.5 * (b_j + b_k)
            m += w
            e1 += w * m1
            e2 += w * m2
            e11 += w * (m1 * m1 + s2)
            e22 += w * (m2 * m2 + s2)
            e12 += w * m1 * m2
    if m <= 0.0:
        raise UndefinedConditioning("joint post-selection probability is not positive")
    e1, e2, e11, e22, e12 = (x / m for x in (e1, e2, e11, e22, e12))
    var1 = e11 - e1 * e1
    var2 = e22 - e2 * e2
    cov = e12 - e1 * e2
    return JointMoments(
        norm_sq=m,
        mean1=e1,
        mean2=e2,
        var1=var1,
        var2=var2,
        cov=cov,
        corr=cov / math.sqrt(var1 * var2),
    )


@lru_cache(maxsize=8)
def _gauss_legendre(points: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(points)


def quadrature_moments(wave: TwoPhotonPointerWave, points: int = 400) -> JointMoments:
    """Joint moments by tensor-product Gauss-Legendre quadrature of the density."""
    nodes, weights = _gauss_legendre(points)
    lo1, hi1 = wave.window(axis=0)
    lo2, hi2 = wave.window(axis=1)
    y1 = 0.5 * (hi1 - lo1) * nodes + 0.5 * (hi1 + lo1)
    y2 = 0.5 * (hi2 - lo2) * nodes + 0.5 * (hi2 + lo2)
    d = wave.density(y1[:, None], y2[None, :])
    w2 = weights[:, None] * weights[None, :]
    jac = 0.25 * (hi1 - lo1) * (hi2 - lo2)
    mass = float(np.sum(w2 * d))
    if mass <= 0.0:
        raise UndefinedConditioning("quadrature found zero probability mass")
    e1 = float(np.sum(w2 * d * y1[:, None])) / mass
    e2 = float(np.sum(w2 * d * y2[None, :])) / mass
    e11 = float(np.sum(w2 * d * y1[:, None] ** 2)) / mass
    e22 = float(np.sum(w2 * d * y2[None, :] ** 2)) / mass
    e12 = float(np.sum(w2 * d * y1[:, None] * y2[None, :])) / mass
    var1 = e11 - e1 * e1
    var2 = e22 - e2 * e2
    cov = e12 - e1 * e2
    return JointMoments(
        norm_sq=mass * jac,
        mean1=e1,
        mean2=e2,
        var1=var1,
        var2=var2,
        cov=cov,
        corr=cov / math.sqrt(var1 * var2),
    )
