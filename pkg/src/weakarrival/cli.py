"""Command-line front end: closed-form evaluations, sweeps, and Monte Carlo runs.

Angles are radians unless suffixed with `deg`.  Every subcommand supports
`--format json|csv`; data goes to stdout, diagnostics to stderr.  Exit
codes: 0 success, 1 domain error (orthogonal/undefined selection), 2 usage
error.  CSV output starts with the versioned comment line `# weak-arrival v1`
so downstream plots can rely on the column order.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bell import BellSetup, bell_weak_arrivals
from .errors import (
    DegenerateAngle,
    InsufficientSamples,
    OrthogonalSelection,
    UndefinedConditioning,
    WeakArrivalError,
)
from .montecarlo import RunConfig, histogram_csv, run_bell, run_single_photon
from .pointer import exact_mean_arrival, final_pointer_state
from .weakvalue import Apparatus, abl_mean_arrival, weak_arrival

CSV_VERSION_LINE = "# weak-arrival v1"

SWEEP_COLUMNS = (
    "variable",
    "weak_value",
    "exact_mean",
    "abl_mean",
    "probability_weak",
    "probability_exact",
    "status",
)


def angle_arg(text: str) -> float:
    """Radians by default; degrees only with an explicit `deg` suffix."""
    t = text.strip()
    try:
        if t.endswith("deg"):
            return math.radians(float(t[: -len("deg")]))
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid angle {text!r} (use radians, or degrees with a 'deg' suffix)"
        )


def count_arg(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid count {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"count must be >= 1, got {text!r}")
    return value


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _emit_csv(columns, rows) -> None:
    print(CSV_VERSION_LINE)
    print(",".join(columns))
    for row in rows:
        print(",".join(_fmt(row.get(c)) for c in columns))


def _flatten(payload: dict) -> dict:
    """Flatten nested dicts/lists into scalar CSV cells (keys joined by `_`)."""
    flat = {}
    for key, value in payload.items():
        if isinstance(value, (list, tuple)):
            flat.update(_flatten({f"{key}_{i}": v for i, v in enumerate(value, 1)}))
        elif isinstance(value, dict):
            flat.update(_flatten({f"{key}_{k}": v for k, v in value.items()}))
        else:
            flat[key] = value
    return flat


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        _emit_json(payload)
    else:
        flat = _flatten(payload)
        _emit_csv(list(flat.keys()), [flat])


def cmd_weak(args) -> int:
    app = Apparatus(
        theta=args.theta, phi=args.phi, epsilon=args.epsilon, sigma=args.sigma, c=args.c
    )
    result = weak_arrival(app)
    payload = {
        "command": "weak",
        "theta": app.theta,
        "phi": app.phi,
        "epsilon": app.epsilon,
        "sigma": app.sigma,
        "value_re": result.value.real,
        "value_im": result.value.imag,
        "probability_weak": result.probability,
        "probability_exact": final_pointer_state(app).norm_sq(),
        "regime": result.regime_note,
    }
    _emit(payload, args.format)
    return 0


def _sweep_point(variable: str, value: float, args) -> tuple[float, float, float, float]:
    theta, phi, epsilon, sigma = args.theta, args.phi, args.epsilon, args.sigma
    if variable == "theta":
        theta = value
    elif variable == "phi":
        phi = value
    elif variable == "delta":
        phi = theta - 0.5 * math.pi - value
    elif variable == "epsilon_over_sigma":
        epsilon = value * sigma
    return theta, phi, epsilon, sigma


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise ValueError(f"sweep needs at least 2 steps, got {args.steps}")
    if args.start == args.stop:
        raise ValueError("sweep needs start != stop")
    rows = []
    for value in np.linspace(args.start, args.stop, args.steps):
        theta, phi, epsilon, sigma = _sweep_point(args.variable, float(value), args)
        app = Apparatus(theta=theta, phi=phi, epsilon=epsilon, sigma=sigma)
        row = {c: None for c in SWEEP_COLUMNS}
        row["variable"] = float(value)
        status = "ok"
        try:
            weak = weak_arrival(app)
            row["weak_value"] = weak.value.real
            row["probability_weak"] = weak.probability
            row["abl_mean"] = abl_mean_arrival(
                app.pre_state(), app.post_state(), app.epsilon
            )
        except (OrthogonalSelection, UndefinedConditioning):
            status = "orthogonal"
        try:
            mean = exact_mean_arrival(app)
            row["exact_mean"] = mean.mean
            row["probability_exact"] = mean.norm_sq
        except UndefinedConditioning:
            status = "undefined"
        row["status"] = status
        rows.append(row)
    if args.format == "json":
        _emit_json({"command": "sweep", "variable": args.variable, "rows": rows})
    else:
        _emit_csv(SWEEP_COLUMNS, rows)
    return 0


def cmd_bell(args) -> int:
    exact = bell_weak_arrivals(args.theta, args.delta, args.epsilon, "exact")
    first = bell_weak_arrivals(args.theta, args.delta, args.epsilon, "first_order")
    payload = {
        "command": "bell",
        "theta": args.theta,
        "delta": args.delta,
        "epsilon": args.epsilon,
        "sigma": args.sigma,
        "value_re": [exact.value[0].real, exact.value[1].real],
        "value_im": [exact.value[0].imag, exact.value[1].imag],
        "probability": exact.probability,
        "first_order_value_re": [first.value[0].real, first.value[1].real],
        "first_order_value_im": [first.value[0].imag, first.value[1].imag],
        "first_order_probability": first.probability,
        "correlated": exact.correlated and first.correlated,
    }
    if args.mc:
        cfg = RunConfig(
            apparatus=BellSetup(
                theta=args.theta, delta=args.delta, epsilon=args.epsilon, sigma=args.sigma
            ),
            n_trials=args.trials,
            seed=args.seed,
            grid_points=args.grid_points,
        )
        payload["mc"] = run_bell(cfg).to_json_dict()
    _emit(payload, args.format)
    return 0


def cmd_mc(args) -> int:
    if args.eps_over_sigma is not None:
        epsilon = args.eps_over_sigma * args.sigma
    else:
        epsilon = args.epsilon
    cfg = RunConfig(
        apparatus=Apparatus(
            theta=args.theta, phi=args.phi, epsilon=epsilon, sigma=args.sigma
        ),
        n_trials=args.trials,
        seed=args.seed,
        grid_points=args.grid_points,
    )
    report = run_single_photon(cfg, keep_samples=bool(args.histogram))
    payload = {"command": "mc", **report.to_json_dict()}
    if args.histogram:
        with open(args.histogram, "w", encoding="utf-8") as fh:
            fh.write(CSV_VERSION_LINE + "\n")
            fh.write(histogram_csv(report.samples, bins=args.bins))
        print(f"histogram written to {args.histogram}", file=sys.stderr)
    _emit(payload, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weak-arrival",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument(
            "--format", choices=("json", "csv"), default="json",
            help="output format (default json)",
        )

    p_weak = sub.add_parser(
        "weak", help="closed-form weak arrival value and probabilities"
    )
    p_weak.add_argument("--theta", type=angle_arg, required=True,
                        help="pre-selection angle (radians, or e.g. 45deg)")
    p_weak.add_argument("--phi", type=angle_arg, required=True,
                        help="post-selection angle")
    p_weak.add_argument("--epsilon", type=float, required=True,
                        help="path-length difference")
    p_weak.add_argument("--sigma", type=float, default=1.0,
                        help="envelope width (default 1)")
    p_weak.add_argument("--c", type=float, default=1.0, help="speed (default 1)")
    add_common(p_weak)
    p_weak.set_defaults(func=cmd_weak)

    p_sweep = sub.add_parser(
        "sweep",
        help="tabulate weak value, exact mean, ideal-measurement mean, and "
        "both probabilities over a parameter grid",
        epilog="columns (fixed order): " + ",".join(SWEEP_COLUMNS)
        + "; singular points become sentinel rows with empty cells and a "
        "status of 'orthogonal' or 'undefined'",
    )
    p_sweep.add_argument(
        "--variable", required=True,
        choices=("theta", "phi", "delta", "epsilon_over_sigma"),
        help="swept parameter; delta sweeps phi = theta - pi/2 - delta",
    )
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--stop", type=float, required=True)
    p_sweep.add_argument("--steps", type=count_arg, required=True)
    p_sweep.add_argument("--theta", type=angle_arg, default=0.25 * math.pi)
    p_sweep.add_argument("--phi", type=angle_arg, default=0.25 * math.pi)
    p_sweep.add_argument("--epsilon", type=float, default=1.0)
    p_sweep.add_argument("--sigma", type=float, default=1.0)
    add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_bell = sub.add_parser(
        "bell", help="joint weak arrival times of an entangled pair"
    )
    p_bell.add_argument("--theta", type=angle_arg, required=True)
    p_bell.add_argument("--delta", type=angle_arg, required=True,
                        help="post-selection offset from orthogonality")
    p_bell.add_argument("--epsilon", type=float, required=True)
    p_bell.add_argument("--sigma", type=float, default=1.0)
    p_bell.add_argument("--mc", action="store_true",
                        help="also run the stochastic pair experiment")
    p_bell.add_argument("--trials", type=count_arg, default=100_000)
    p_bell.add_argument("--seed", type=int, default=0)
    p_bell.add_argument("--grid-points", type=count_arg, default=4096)
    add_common(p_bell)
    p_bell.set_defaults(func=cmd_bell)

    p_mc = sub.add_parser(
        "mc", help="stochastic single-photon run with conditional sampling"
    )
    p_mc.add_argument("--theta", type=angle_arg, required=True)
    p_mc.add_argument("--phi", type=angle_arg, required=True)
    eps_group = p_mc.add_mutually_exclusive_group(required=True)
    eps_group.add_argument("--epsilon", type=float, default=None)
    eps_group.add_argument("--eps-over-sigma", type=float, default=None,
                           help="set epsilon as a multiple of sigma")
    p_mc.add_argument("--sigma", type=float, default=1.0)
    p_mc.add_argument("--trials", type=count_arg, default=100_000)
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--grid-points", type=count_arg, default=4096)
    p_mc.add_argument("--histogram", default=None, metavar="PATH",
                      help="write a sample histogram CSV to PATH")
    p_mc.add_argument("--bins", type=count_arg, default=50)
    add_common(p_mc)
    p_mc.set_defaults(func=cmd_mc)

    return parser


_ERROR_KINDS = {
    OrthogonalSelection: "orthogonal_selection",
    UndefinedConditioning: "undefined_conditioning",
    DegenerateAngle: "degenerate_angle",
    InsufficientSamples: "insufficient_samples",
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WeakArrivalError as exc:
        payload = {
            "error": _ERROR_KINDS.get(type(exc), "domain_error"),
            "message": str(exc),
        }
        if isinstance(exc, OrthogonalSelection):
            payload["overlap"] = exc.overlap_magnitude
        if isinstance(exc, InsufficientSamples):
            payload["n_trials"] = exc.n_trials
            payload["analytic_probability"] = exc.analytic_probability
        print(json.dumps(payload, sort_keys=True))
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
