"""Polarization state vectors over the {H, V} basis and two-photon extensions.

Amplitudes are complex throughout: every state used in the arrival-time
analysis is real, but weak values are complex in general and the tests
exercise the complex paths too.  Basis order is fixed as (H, V) and
(HH, HV, VH, VV); JSON output always labels components so the convention
is bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

POLARIZATION_BASIS = ("H", "V")
TWO_PHOTON_BASIS = ("HH", "HV", "VH", "VV")


@dataclass(frozen=True)
class PolarizationState:
    """Single-photon polarization amplitudes (amp_h, amp_v).

    Plain construction stores the amplitudes as given; use
    :meth:`from_angle` or :meth:`normalized` for unit-norm states.
    """

    amp_h: complex
    amp_v: complex

    @classmethod
    def from_angle(cls, angle: float) -> "PolarizationState":
        """Linear polarization at `angle` radians from horizontal: (cos, sin)."""
        if not math.isfinite(angle):
            raise ValueError(f"polarization angle must be finite, got {angle!r}")
        return cls(complex(math.cos(angle)), complex(math.sin(angle)))

    @classmethod
    def normalized(cls, amp_h: complex, amp_v: complex) -> "PolarizationState":
        n = math.sqrt(abs(amp_h) ** 2 + abs(amp_v) ** 2)
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return cls(complex(amp_h) / n, complex(amp_v) / n)

    def as_array(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v], dtype=complex)

    def norm(self) -> float:
        return math.sqrt(abs(self.amp_h) ** 2 + abs(self.amp_v) ** 2)

    def to_json_dict(self) -> dict:
        return _state_json(POLARIZATION_BASIS, self.as_array())

    @classmethod
    def from_json_dict(cls, data: dict) -> "PolarizationState":
        amps = _amps_from_json(POLARIZATION_BASIS, data)
        return cls(amps[0], amps[1])


@dataclass(frozen=True)
class TwoPhotonState:
    """Two-photon polarization amplitudes over (HH, HV, VH, VV)."""

    amp_hh: complex
    amp_hv: complex
    amp_vh: complex
    amp_vv: complex

    @classmethod
    def normalized(
        cls, amp_hh: complex, amp_hv: complex, amp_vh: complex, amp_vv: complex
    ) -> "TwoPhotonState":
        n = math.sqrt(sum(abs(a) ** 2 for a in (amp_hh, amp_hv, amp_vh, amp_vv)))
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return cls(*(complex(a) / n for a in (amp_hh, amp_hv, amp_vh, amp_vv)))

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.amp_hh, self.amp_hv, self.amp_vh, self.amp_vv], dtype=complex
        )

    def amplitude(self, label: str) -> complex:
        return getattr(self, f"amp_{label.lower()}")

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.as_array()) ** 2)))

    def to_json_dict(self) -> dict:
        return _state_json(TWO_PHOTON_BASIS, self.as_array())

    @classmethod
    def from_json_dict(cls, data: dict) -> "TwoPhotonState":
        amps = _amps_from_json(TWO_PHOTON_BASIS, data)
        return cls(*amps)


def inner(a, b) -> complex:
    """Hermitian inner product <a|b>, conjugate-linear in the first argument.

    Accepts two states of the same kind (single- or two-photon).  Summation
    is explicit in basis order so the result is bit-reproducible.
    """
    return hermitian_dot(a.as_array(), b.as_array())


def hermitian_dot(xs, ys) -> complex:
    """sum_i conj(x_i) y_i accumulated left to right in plain complex arithmetic."""
    total = 0j
    for x, y in zip(xs.tolist(), ys.tolist()):
        total += x.conjugate() * y
    return total


def bell_phi_plus() -> TwoPhotonState:
    """Maximally entangled pair (|HH> + |VV>)/sqrt(2)."""
    r = 1.0 / math.sqrt(2.0)
    return TwoPhotonState(complex(r), 0j, 0j, complex(r))


def product_state(a: PolarizationState, b: PolarizationState) -> TwoPhotonState:
    """Tensor product a (x) b: amp_XY = a_X * b_Y."""
    return TwoPhotonState(
        a.amp_h * b.amp_h,
        a.amp_h * b.amp_v,
        a.amp_v * b.amp_h,
        a.amp_v * b.amp_v,
    )


def _state_json(basis, amps: np.ndarray) -> dict:
    return {
        "basis": list(basis),
        "re": [float(a.real) for a in amps],
        "im": [float(a.imag) for a in amps],
    }


def _amps_from_json(expected_basis, data: dict) -> list[complex]:
    basis = tuple(data["basis"])
    if basis != tuple(expected_basis):
        raise ValueError(f"expected basis {expected_basis}, got {basis}")
    re, im = data["re"], data["im"]
    if len(re) != len(expected_basis) or len(im) != len(expected_basis):
        raise ValueError("re/im length does not match basis length")
    return [complex(r, i) for r, i in zip(re, im)]
