"""Finite-width pointer analysis in the arrival coordinate y = x - c t.

After post-selection the (unnormalized) pointer wavefunction is a sum of
displaced Gaussian envelopes

    psi(y) = a G(y) + b G(y - eps),   a = cos(phi) cos(theta),
                                      b = sin(phi) sin(theta),

with G(y) = (sigma^2 pi)^(-1/4) exp(-y^2 / 2 sigma^2).  Everything here is
exact in eps/sigma: the conditional mean arrival interpolates between the
weak value (eps << sigma) and the ideal-measurement mean (eps >> sigma).

Computations use the (a, b) coefficient form throughout; the equivalent
(gamma, a_bar, lambda) parametrization is provided as a cross-check but is
singular at theta + phi = pi/2 even though the state is regular there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from .errors import GammaSingular, UndefinedConditioning
from .weakvalue import Apparatus, ORTHOGONALITY_TOL

#: Quadrature/sampling windows extend this many sigma beyond the extreme
#: Gaussian centers; the truncated mass is below 1e-14 of the total.
WINDOW_SIGMAS = 8.0


@dataclass(frozen=True)
class PointerWave:
    """Superposition of equal-width Gaussian envelopes in the arrival coordinate.

    terms : tuple of (coefficient, center) pairs
        Each term is coefficient * (sigma^2 pi)^(-1/4) exp(-(y-center)^2 / 2 sigma^2).
        The wave is in general unnormalized.
    """

    terms: tuple[tuple[complex, float], ...]
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if len(self.terms) == 0:
            raise ValueError("PointerWave needs at least one term")

    def amplitude(self, y):
        """Complex wavefunction value(s) at y (scalar or array)."""
        y = np.asarray(y, dtype=float)
        pref = (self.sigma**2 * math.pi) ** -0.25
        total = np.zeros(y.shape, dtype=complex)
        for coeff, center in self.terms:
            total += coeff * pref * np.exp(-((y - center) ** 2) / (2.0 * self.sigma**2))
        return total

    def density(self, y):
        """|psi(y)|^2, unnormalized; nonnegative by construction."""
        return np.abs(self.amplitude(y)) ** 2

    def norm_sq(self) -> float:
        """<psi|psi> in closed form: sum_jk conj(c_j) c_k exp(-(y_j-y_k)^2 / 4 sigma^2)."""
        total = 0.0 + 0.0j
        for c_j, y_j in self.terms:
            for c_k, y_k in self.terms:
                total += c_j.conjugate() * c_k * self._overlap(y_j - y_k)
        return float(total.real)

    def cdf(self, y):
        """Normalized cumulative distribution of the conditional density.

        Each pair of envelopes contributes a Gaussian of width sigma/sqrt(2)
        centered midway, weighted by the pair overlap; integrating gives a
        signed mixture of normal CDFs.
        """
        n2 = self.norm_sq()
        if n2 <= 0.0:
            raise UndefinedConditioning("pointer wave has zero norm")
        y = np.asarray(y, dtype=float)
        s = self.sigma / math.sqrt(2.0)
        total = np.zeros(y.shape, dtype=float)
        for c_j, y_j in self.terms:
            for c_k, y_k in self.terms:
                w = (c_j.conjugate() * c_k).real * self._overlap(y_j - y_k)
                if w != 0.0:
                    total += w * ndtr((y - 0.5 * (y_j + y_k)) / s)
        return total / n2

    def window(self, pad: float = WINDOW_SIGMAS) -> tuple[float, float]:
        centers = [c for _, c in self.terms]
        return min(centers) - pad * self.sigma, max(centers) + pad * self.sigma

    def _overlap(self, separation: float) -> float:
        return math.exp(-(separation**2) / (4.0 * self.sigma**2))


@dataclass(frozen=True)
class GammaForm:
    """Exact-solution parameters (gamma, a_bar, lambda).

    gamma = cos(theta - phi) / cos(theta + phi) and a_bar = lambda = eps / 2.
    """

    gamma: float
    a_bar: float
    lam: float


class MeanResult(NamedTuple):
    mean: float
    norm_sq: float


def final_pointer_state(app: Apparatus) -> PointerWave:
    """Unnormalized post-selected pointer wave: reference and delayed envelopes."""
    a = math.cos(app.phi) * math.cos(app.theta)
    b = math.sin(app.phi) * math.sin(app.theta)
    return PointerWave(
        terms=((complex(a), 0.0), (complex(b), app.epsilon)), sigma=app.sigma
    )


def gamma_form(app: Apparatus) -> GammaForm:
    cos_sum = math.cos(app.theta + app.phi)
    if abs(cos_sum) <= ORTHOGONALITY_TOL:
        raise GammaSingular(
            f"cos(theta+phi) = {cos_sum:.3e}; use the coefficient form instead"
        )
    gamma = math.cos(app.theta - app.phi) / cos_sum
    return GammaForm(gamma=gamma, a_bar=0.5 * app.epsilon, lam=0.5 * app.epsilon)


def pointer_from_gamma(form: GammaForm, app: Apparatus) -> PointerWave:
    """Rebuild the pointer wave from the (gamma, a_bar, lambda) parametrization.

    Coefficients are cos(theta+phi)/2 * (1+gamma) at a_bar - lambda and
    -cos(theta+phi)/2 * (1-gamma) at a_bar + lambda; must reproduce
    :func:`final_pointer_state` wherever gamma is defined.
    """
    pref = 0.5 * math.cos(app.theta + app.phi)
    return PointerWave(
        terms=(
            (complex(pref * (1.0 + form.gamma)), form.a_bar - form.lam),
            (complex(-pref * (1.0 - form.gamma)), form.a_bar + form.lam),
        ),
        sigma=app.sigma,
    )


def _coefficients(app: Apparatus) -> tuple[float, float, float]:
    a = math.cos(app.phi) * math.cos(app.theta)
    b = math.sin(app.phi) * math.sin(app.theta)
    k = math.exp(-(app.epsilon**2) / (4.0 * app.sigma**2))
    if max(abs(a), abs(b)) <= ORTHOGONALITY_TOL:
        raise UndefinedConditioning(
            "orthogonal selection annihilates the state (both envelope "
            f"coefficients below {ORTHOGONALITY_TOL:g})"
        )
    return a, b, k


def exact_mean_arrival(app: Apparatus) -> MeanResult:
    """Exact conditional mean arrival and post-selection probability.

    mean = eps (b^2 + a b k) / (a^2 + b^2 + 2 a b k) with
    k = exp(-eps^2 / 4 sigma^2); norm_sq is the denominator.  The mean
    tends to the weak value as eps/sigma -> 0 and to the ideal-measurement
    mean eps b^2/(a^2 + b^2) as eps/sigma -> infinity.
    """
    a, b, k = _coefficients(app)
    norm_sq = a * a + b * b + 2.0 * a * b * k
    if norm_sq <= 0.0:
        raise UndefinedConditioning(f"post-selection probability {norm_sq} is not positive")
    mean = app.epsilon * (b * b + a * b * k) / norm_sq
    return MeanResult(mean=mean, norm_sq=norm_sq)


def weak_norm_mean_arrival(app: Apparatus) -> float:
    """Mean arrival normalized by the weak-limit norm cos^2(theta - phi).

    Reported alongside :func:`exact_mean_arrival` for comparison; the two
    agree as eps/sigma -> 0 but only the exact norm makes the conditional
    density integrate to one at finite width.
    """
    a, b, k = _coefficients(app)
    cos_diff = math.cos(app.theta - app.phi)
    if abs(cos_diff) <= ORTHOGONALITY_TOL:
        raise UndefinedConditioning("weak-limit norm cos^2(theta-phi) vanishes")
    return app.epsilon * (b * b + a * b * k) / (cos_diff * cos_diff)


@lru_cache(maxsize=8)
def _gauss_legendre(points: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(points)


def quadrature_mean(app: Apparatus, points: int = 1200) -> float:
    """Conditional mean by fixed Gauss-Legendre quadrature of y |psi|^2.

    Both the numerator and the normalization are integrated numerically
    over [min_center - 8 sigma, max_center + 8 sigma], keeping this path
    independent of the closed form.
    """
    _coefficients(app)
    wave = final_pointer_state(app)
    nodes, weights = _gauss_legendre(points)
    lo, hi = wave.window()
    y = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    d = wave.density(y)
    total = float(np.dot(weights, d))
    if total <= 0.0:
        raise UndefinedConditioning("quadrature found zero probability mass")
    return float(np.dot(weights, y * d)) / total


def density(wave: PointerWave, y):
    """Unnormalized |psi(y)|^2 of a pointer wave."""
    return wave.density(y)
