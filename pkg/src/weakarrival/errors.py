"""Domain errors shared across the package."""

from __future__ import annotations


class WeakArrivalError(Exception):
    """Base class for all domain errors raised by this package."""


class OrthogonalSelection(WeakArrivalError):
    """Pre- and post-selection are (numerically) orthogonal.

    The weak-value quotient is undefined at this point; callers probing the
    divergent neighbourhood should move to a small nonzero offset instead.
    Carries the magnitude of the offending overlap.
    """

    def __init__(self, overlap_magnitude: float, message: str | None = None):
        self.overlap_magnitude = float(overlap_magnitude)
        super().__init__(
            message
            or f"pre/post selection overlap magnitude {self.overlap_magnitude:.3e} "
            "is numerically zero"
        )


class DegenerateAngle(WeakArrivalError):
    """An angle sits on a multiple of pi/2 where tan or cot diverges."""


class UndefinedConditioning(WeakArrivalError):
    """Conditional statistics requested where the success probability is zero."""


class GammaSingular(WeakArrivalError):
    """The (gamma, a_bar, lambda) parametrization is singular: cos(theta+phi) = 0.

    The underlying pointer state is regular there; use the direct
    coefficient form instead.
    """


class InsufficientSamples(WeakArrivalError):
    """A stochastic run produced no successful post-selections.

    Carries the trial count and the analytic success probability so the
    caller can still report the (empty) outcome.
    """

    def __init__(self, n_trials: int, analytic_probability: float):
        self.n_trials = int(n_trials)
        self.analytic_probability = float(analytic_probability)
        super().__init__(
            f"0 of {self.n_trials} trials passed post-selection "
            f"(analytic probability {self.analytic_probability:.3e}); "
            "conditional statistics are undefined"
        )
