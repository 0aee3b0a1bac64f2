"""Stochastic realization of the arrival-time experiment.

Each trial is an i.i.d. photon (or photon pair): post-selection succeeds
with the exact finite-width probability, and successful trials draw the
arrival coordinate from the conditional density by inverse-CDF lookup on a
tabulated grid.  Runs are deterministic given (seed, config): trials are
split into a fixed number of chunks whose generators are spawned from the
seed, so results do not depend on the worker count; per-chunk sums are
pairwise-accumulated and combined with exact compensated summation.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .bell import (
    BellSetup,
    bell_conditional_wave,
    closed_form_moments,
    TwoPhotonPointerWave,
)
from .errors import InsufficientSamples, OrthogonalSelection, UndefinedConditioning
from .pointer import PointerWave, exact_mean_arrival, final_pointer_state
from .weakvalue import Apparatus

#: Trials are split into this many deterministic RNG substreams regardless
#: of how many workers execute them.
N_CHUNKS = 32

THREADS_ENV_VAR = "WEAK_ARRIVAL_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """Configuration of a stochastic run.

    apparatus : Apparatus or BellSetup
        Single-photon or pair experiment parameters.
    grid_points : int
        Resolution of the tabulated conditional density (>= 256); the
        default 4096 keeps the CDF interpolation error below 1e-6 of the
        total mass for the windows used here.
    """

    apparatus: Union[Apparatus, BellSetup]
    n_trials: int
    seed: int
    grid_points: int = 4096

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        if self.grid_points < 256:
            raise ValueError(f"grid_points must be >= 256, got {self.grid_points}")


@dataclass(frozen=True)
class RunReport:
    """Outcome summary of one station of a stochastic run."""

    n_trials: int
    n_success: int
    empirical_probability: float
    empirical_mean_arrival: float
    standard_error: float | None
    analytic_mean: float
    analytic_probability: float
    generator: str
    samples: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n_success > self.n_trials:
            raise ValueError("n_success cannot exceed n_trials")

    def to_json_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "n_success": self.n_success,
            "empirical_probability": self.empirical_probability,
            "empirical_mean_arrival": self.empirical_mean_arrival,
            "standard_error": self.standard_error,
            "analytic_mean": self.analytic_mean,
            "analytic_probability": self.analytic_probability,
            "generator": self.generator,
        }


@dataclass(frozen=True)
class BellRunReport:
    """Per-station reports plus the correlation summary of a pair run.

    Success is a single Bernoulli event per trial shared by both stations;
    `trial_ids` records, per station, which trials succeeded (identical
    arrays by construction).
    """

    stations: tuple[RunReport, RunReport]
    n_trials: int
    n_success: int
    sample_correlation: float | None
    analytic_correlation: float
    trial_ids: tuple[np.ndarray, np.ndarray] = field(compare=False, repr=False)
    samples: tuple[np.ndarray, np.ndarray] = field(compare=False, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "n_success": self.n_success,
            "station1": self.stations[0].to_json_dict(),
            "station2": self.stations[1].to_json_dict(),
            "sample_correlation": self.sample_correlation,
            "analytic_correlation": self.analytic_correlation,
        }


class _TabulatedSampler:
    """Inverse-CDF sampler for a 1-D pointer density on a fixed grid."""

    def __init__(self, wave: PointerWave, grid_points: int):
        lo, hi = wave.window()
        self.grid = np.linspace(lo, hi, grid_points)
        d = wave.density(self.grid)
        self.cdf = _cumtrapz(d, self.grid)
        self.total = self.cdf[-1]
        if not self.total > 0.0:
            raise UndefinedConditioning("tabulated density has zero mass")

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size) * self.total
        return np.interp(u, self.cdf, self.grid)


def _cumtrapz(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values)
    np.cumsum(0.5 * (values[1:] + values[:-1]) * np.diff(grid), out=out[1:])
    return out


def sample_arrival(
    wave: PointerWave,
    norm_sq: float,
    rng: np.random.Generator,
    size: int | None = None,
    grid_points: int = 4096,
):
    """Draw arrival coordinates from the conditional density |psi|^2 / norm_sq.

    Returns a scalar when `size` is None, else an array of `size` draws.
    """
    if not norm_sq > 0.0:
        raise UndefinedConditioning(f"norm_sq must be > 0, got {norm_sq}")
    sampler = _TabulatedSampler(wave, grid_points)
    if size is None:
        return float(sampler.draw(rng, 1)[0])
    return sampler.draw(rng, size)


def _resolve_workers(workers: int | None) -> int:
    cap = os.environ.get(THREADS_ENV_VAR)
    cap = int(cap) if cap else None
    if workers is None:
        workers = cap if cap is not None else 1
    if cap is not None:
        workers = min(workers, cap)
    return max(1, workers)


def _chunk_sizes(n_trials: int) -> list[int]:
    base, extra = divmod(n_trials, N_CHUNKS)
    return [base + (1 if i < extra else 0) for i in range(N_CHUNKS)]


def _spawn_rngs(seed: int) -> list[np.random.Generator]:
    streams = np.random.SeedSequence(seed).spawn(N_CHUNKS)
    return [np.random.Generator(np.random.PCG64(s)) for s in streams]


def _generator_id(seed: int) -> str:
    return f"numpy PCG64, SeedSequence(seed={seed}).spawn({N_CHUNKS})"


def _map_chunks(task, args, workers: int) -> list:
    if workers == 1:
        return [task(a) for a in args]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, args))


def run_single_photon(
    cfg: RunConfig, workers: int | None = None, keep_samples: bool = False
) -> RunReport:
    """Simulate post-selection and conditional arrival sampling for one photon.

    Deterministic given (seed, config); raises
    :class:`InsufficientSamples` when no trial passes post-selection.
    With `keep_samples` the report carries the drawn arrival coordinates.
    """
    app = cfg.apparatus
    if not isinstance(app, Apparatus):
        raise TypeError("run_single_photon needs an Apparatus configuration")
    analytic = exact_mean_arrival(app)
    p = min(max(analytic.norm_sq, 0.0), 1.0)
    sampler = _TabulatedSampler(final_pointer_state(app), cfg.grid_points)
    rngs = _spawn_rngs(cfg.seed)
    sizes = _chunk_sizes(cfg.n_trials)

    def task(chunk):
        rng, n_i = chunk
        k = int(np.count_nonzero(rng.random(n_i) < p))
        ys = sampler.draw(rng, k)
        return (
            k,
            float(np.sum(ys)),
            float(np.sum(ys * ys)),
            ys if keep_samples else None,
        )

    parts = _map_chunks(task, list(zip(rngs, sizes)), _resolve_workers(workers))
    n_success = sum(k for k, _, _, _ in parts)
    if n_success == 0:
        raise InsufficientSamples(cfg.n_trials, p)
    total = math.fsum(s for _, s, _, _ in parts)
    total_sq = math.fsum(q for _, _, q, _ in parts)
    mean = total / n_success
    se = _standard_error(total_sq, mean, n_success)
    return RunReport(
        n_trials=cfg.n_trials,
        n_success=n_success,
        empirical_probability=n_success / cfg.n_trials,
        empirical_mean_arrival=mean,
        standard_error=se,
        analytic_mean=analytic.mean,
        analytic_probability=p,
        generator=_generator_id(cfg.seed),
        samples=np.concatenate([q[3] for q in parts]) if keep_samples else None,
    )


def _standard_error(total_sq: float, mean: float, n: int) -> float | None:
    if n < 2:
        return None
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return math.sqrt(var / n)


def run_bell(cfg: RunConfig, workers: int | None = None) -> BellRunReport:
    """Simulate the pair experiment with a single shared Bernoulli per trial.

    Successful trials draw (y1, y2) from the exact joint conditional
    density: y1 by inverse CDF of the tabulated marginal, then y2 from the
    conditional density at that y1, tabulated on the same tensor grid.
    """
    setup = cfg.apparatus
    if not isinstance(setup, BellSetup):
        raise TypeError("run_bell needs a BellSetup configuration")
    if setup.delta == 0.0:
        raise OrthogonalSelection(0.0)
    wave = bell_conditional_wave(setup)
    moments = closed_form_moments(wave)
    p = min(max(moments.norm_sq, 0.0), 1.0)

    lo1, hi1 = wave.window(axis=0)
    grid1 = np.linspace(lo1, hi1, cfg.grid_points)
    cdf1 = _cumtrapz(wave.marginal_density(grid1, axis=0), grid1)
    if not cdf1[-1] > 0.0:
        raise UndefinedConditioning("tabulated marginal density has zero mass")
    lo2, hi2 = wave.window(axis=1)
    grid2 = np.linspace(lo2, hi2, cfg.grid_points)

    rngs = _spawn_rngs(cfg.seed)
    sizes = _chunk_sizes(cfg.n_trials)
    offsets = np.concatenate([[0], np.cumsum(sizes)])

    def task(chunk):
        idx, rng, n_i = chunk
        hits = np.nonzero(rng.random(n_i) < p)[0]
        ids = hits + offsets[idx]
        y1 = np.interp(rng.random(hits.size) * cdf1[-1], cdf1, grid1)
        y2 = _conditional_draw(wave, y1, grid2, rng)
        return ids, y1, y2

    parts = _map_chunks(
        task, [(i, r, n) for i, (r, n) in enumerate(zip(rngs, sizes))],
        _resolve_workers(workers),
    )
    ids = np.concatenate([q[0] for q in parts])
    y1 = np.concatenate([q[1] for q in parts])
    y2 = np.concatenate([q[2] for q in parts])
    n_success = ids.size
    if n_success == 0:
        raise InsufficientSamples(cfg.n_trials, p)

    stations = tuple(
        RunReport(
            n_trials=cfg.n_trials,
            n_success=n_success,
            empirical_probability=n_success / cfg.n_trials,
            empirical_mean_arrival=float(np.mean(ys)),
            standard_error=_standard_error(
                float(np.sum(ys * ys)), float(np.mean(ys)), n_success
            ),
            analytic_mean=analytic_mean,
            analytic_probability=p,
            generator=_generator_id(cfg.seed),
        )
        for ys, analytic_mean in ((y1, moments.mean1), (y2, moments.mean2))
    )
    corr = None
    if n_success >= 2 and float(np.std(y1)) > 0 and float(np.std(y2)) > 0:
        corr = float(np.corrcoef(y1, y2)[0, 1])
    return BellRunReport(
        stations=stations,
        n_trials=cfg.n_trials,
        n_success=n_success,
        sample_correlation=corr,
        analytic_correlation=moments.corr,
        trial_ids=(ids, ids.copy()),
        samples=(y1, y2),
    )


#: Row blocks for the conditional y2 sampler; bounds the tabulation memory.
_CONDITIONAL_BLOCK = 1024


def _conditional_draw(
    wave: TwoPhotonPointerWave,
    y1: np.ndarray,
    grid2: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw y2 ~ p(y2 | y1) for each entry of y1 via rowwise inverse CDF."""
    out = np.empty_like(y1)
    pref = (wave.sigma**2 * math.pi) ** -0.25
    two_s2 = 2.0 * wave.sigma**2
    basis = [
        pref * np.exp(-((grid2 - c2) ** 2) / two_s2) for _, _, c2 in wave.terms
    ]
    u_all = rng.random(y1.size)
    for start in range(0, y1.size, _CONDITIONAL_BLOCK):
        rows = slice(start, min(start + _CONDITIONAL_BLOCK, y1.size))
        yb = y1[rows]
        amp = np.zeros((yb.size, grid2.size), dtype=complex)
        for (coeff, c1, _), g2 in zip(wave.terms, basis):
            col = coeff * pref * np.exp(-((yb - c1) ** 2) / two_s2)
            amp += col[:, None] * g2[None, :]
        dens = np.abs(amp) ** 2
        del amp
        dy = grid2[1] - grid2[0]
        cdf = np.zeros_like(dens)
        np.cumsum(0.5 * (dens[:, 1:] + dens[:, :-1]) * dy, axis=1, out=cdf[:, 1:])
        totals = cdf[:, -1]
        if np.any(totals <= 0.0):
            raise UndefinedConditioning("conditional density has zero mass")
        u = u_all[rows] * totals
        j = np.sum(cdf < u[:, None], axis=1)
        j = np.clip(j, 1, grid2.size - 1)
        c_hi = np.take_along_axis(cdf, j[:, None], axis=1)[:, 0]
        c_lo = np.take_along_axis(cdf, (j - 1)[:, None], axis=1)[:, 0]
        span = c_hi - c_lo
        frac = np.where(span > 0.0, (u - c_lo) / np.where(span > 0, span, 1.0), 0.0)
        out[rows] = grid2[j - 1] + frac * dy
    return out


def report_to_json(report) -> str:
    """Serialize a run report deterministically (sorted keys)."""
    return json.dumps(report.to_json_dict(), sort_keys=True)


def histogram_csv(samples: np.ndarray, bins: int = 50) -> str:
    """Render a histogram as CSV rows (bin_left, bin_right, count)."""
    counts, edges = np.histogram(np.asarray(samples, dtype=float), bins=bins)
    lines = ["bin_left,bin_right,count"]
    for i, c in enumerate(counts):
        lines.append(f"{edges[i]:.17g},{edges[i + 1]:.17g},{int(c)}")
    return "\n".join(lines) + "\n"
