"""Command-line interface.

Subcommands:
    analyze    classification report for a system-description file
    transform  transformed-Hamiltonian dump (constant matrix + residual terms)
    census     classification table over all canonical parity patterns for N
    simulate   lab-frame population traces (tabular, one column per level)
    verify     lab RK4 vs frame matrix-exponential propagation, pass/fail

Exit status: 0 success, 1 validation failure, 2 file/format error,
3 verification failure (deviation beyond tolerance, or no time-independent
frame exists).

Output is deterministic; --format machine emits one JSON document.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .census import census as run_census
from .dynamics import (
    FrameResidualError,
    basis_state,
    compare_populations,
    default_horizon,
    default_step,
    propagate_frame,
    propagate_lab,
)
from .frames import DETUNING_EPS_REL, classify, transform
from .hamiltonian import build_rwa_hamiltonian
from .model import load_system, save_system, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FILE = 2
EXIT_VERIFY = 3

DEFAULT_VERIFY_TOL = 1e-6


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _load(path):
    try:
        return load_system(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise SystemExit2(f"cannot read system file {path}: {exc}") from exc


class SystemExit2(Exception):
    """File/format error; mapped to exit status 2."""


def _validated(system):
    report = validate(system)
    if not report.ok:
        for v in report.violations:
            print(f"validation: {v.kind}: {v.message}", file=sys.stderr)
        return None
    return report


def _gauge_arg(args):
    return (args.gauge,) if args.gauge is not None else None


def _classification_dict(result):
    return {
        "verdict": result.verdict.value,
        "components": [list(c) for c in result.components],
        "gauge": list(result.frame.gauge),
        "frame": {
            str(idx): val
            for idx, val in zip(result.frame.level_indices, result.frame.omega_bar)
        },
        "detunings": [
            {
                "expression": d.as_string(),
                "coefficients": list(d.coefficients),
                "value": d.value,
                "cycle": [list(p) for p in d.cycle_edges],
            }
            for d in result.detunings
        ],
        "residual_count": result.residual_pair_count,
        "tolerance": result.tolerance,
        "notes": list(result.notes),
    }


def cmd_analyze(args) -> int:
    system = _load(args.input)
    if _validated(system) is None:
        return EXIT_INVALID
    result = classify(system, gauge=_gauge_arg(args), eps_rel=args.tolerance)
    if args.export:
        save_system(system, args.export)
    rotated = transform(build_rwa_hamiltonian(system), result.frame,
                        eps_rel=args.tolerance)
    residual = [
        {"row": t.row, "col": t.col, "frequency": t.frequency}
        for t in rotated.residual
    ]

    if args.format == "machine":
        print(json.dumps(
            {"command": "analyze", "residual_terms": residual,
             **_classification_dict(result)},
            sort_keys=True,
        ))
        return EXIT_OK

    print(f"verdict: {result.verdict.value}")
    print("components: " + "; ".join(",".join(map(str, c)) for c in result.components))
    print("gauge pins: " + ",".join(map(str, result.frame.gauge)))
    print("frame frequencies:")
    for idx, val in zip(result.frame.level_indices, result.frame.omega_bar):
        print(f"  level {idx}: {_fmt(val)}")
    if result.detunings:
        print(f"detuning conditions ({len(result.detunings)}):")
        for d in result.detunings:
            coeffs = ",".join(f"{c:+d}" for c in d.coefficients)
            print(f"  {d.as_string()} = {_fmt(d.value)}  [coefficients {coeffs}]")
    else:
        print("detuning conditions: none")
    print(f"residual oscillatory pairs: {result.residual_pair_count}")
    for t in rotated.residual:
        print(f"  residual {t.row}-{t.col} at frequency {_fmt(t.frequency)}")
    for note in result.notes:
        print(f"note: {note}")
    return EXIT_OK


def cmd_transform(args) -> int:
    system = _load(args.input)
    if _validated(system) is None:
        return EXIT_INVALID
    h = build_rwa_hamiltonian(system)
    result = classify(system, gauge=_gauge_arg(args), eps_rel=args.tolerance)
    rotated = transform(h, result.frame, eps_rel=args.tolerance)

    n = rotated.dimension
    entries = [
        {"re": rotated.constant[r, c].real, "im": rotated.constant[r, c].imag}
        for r in range(n)
        for c in range(n)
    ]
    residual = [
        {
            "row": t.row,
            "col": t.col,
            "amplitude": {"re": t.amplitude.real, "im": t.amplitude.imag},
            "frequency": t.frequency,
        }
        for t in rotated.residual
    ]
    if args.format == "machine":
        print(json.dumps(
            {
                "command": "transform",
                "dimension": n,
                "levels": list(rotated.level_indices),
                "constant": entries,
                "residual": residual,
                "frame": {
                    str(idx): val
                    for idx, val in zip(rotated.level_indices, rotated.omega_bar)
                },
            },
            sort_keys=True,
        ))
        return EXIT_OK

    print(f"dimension: {n}")
    print("constant matrix (row-major re,im):")
    for r in range(n):
        row = "  ".join(
            f"({_fmt(rotated.constant[r, c].real)},{_fmt(rotated.constant[r, c].imag)})"
            for c in range(n)
        )
        print(f"  {row}")
    if residual:
        print(f"residual oscillatory terms ({len(residual)}):")
        for t in rotated.residual:
            print(
                f"  {t.row}-{t.col}: amplitude ({_fmt(t.amplitude.real)},"
                f"{_fmt(t.amplitude.imag)}), frequency {_fmt(t.frequency)}"
            )
    else:
        print("residual oscillatory terms: none")
    return EXIT_OK


def cmd_census(args) -> int:
    records = run_census(args.levels)
    if args.format == "machine":
        print(json.dumps(
            {
                "command": "census",
                "levels": args.levels,
                "records": [
                    {
                        "pattern": r.pattern.as_string(),
                        "name": r.name,
                        "verdict": r.verdict.value,
                        "transitions": r.n_transitions,
                        "detuning_count": r.detuning_count,
                        "detunings": list(r.detuning_strings),
                    }
                    for r in records
                ],
            },
            sort_keys=True,
        ))
        return EXIT_OK

    width = max(len("pattern"), args.levels)
    print(f"{'pattern':<{width}}  {'name':<9}  {'edges':>5}  "
          f"{'detunings':>9}  verdict")
    for r in records:
        name = r.name or "-"
        print(
            f"{r.pattern.as_string():<{width}}  {name:<9}  {r.n_transitions:>5}  "
            f"{r.detuning_count:>9}  {r.verdict.value}"
        )
        for s in r.detuning_strings:
            print(f"{'':<{width}}    {s}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    system = _load(args.input)
    if _validated(system) is None:
        return EXIT_INVALID
    h = build_rwa_hamiltonian(system)
    psi0 = basis_state(h, args.initial if args.initial is not None
                       else min(h.level_indices))
    result = propagate_lab(h, psi0, t_final=args.horizon, step=args.step)

    if args.format == "machine":
        print(json.dumps(
            {
                "command": "simulate",
                "levels": list(h.level_indices),
                "norm_drift": result.norm_drift,
                "times": result.times.tolist(),
                "populations": result.populations().tolist(),
            },
            sort_keys=True,
        ))
        return EXIT_OK

    header = "t " + " ".join(f"p{idx}" for idx in h.level_indices)
    print(header)
    pops = result.populations()
    for ti, t in enumerate(result.times):
        print(_fmt(float(t)) + " " + " ".join(_fmt(float(p)) for p in pops[ti]))
    return EXIT_OK


def cmd_verify(args) -> int:
    system = _load(args.input)
    if _validated(system) is None:
        return EXIT_INVALID
    h = build_rwa_hamiltonian(system)
    result = classify(system, gauge=_gauge_arg(args))

    # invariance probe: verdict and detuning values must not depend on the
    # spanning forest or the gauge pin
    rng = random.Random(args.seed)
    trials = 20
    invariant = True
    for _ in range(trials):
        alt = classify(system, rng=rng)
        if alt.verdict is not result.verdict:
            invariant = False
        elif len(alt.detunings) != len(result.detunings):
            invariant = False
        elif len(result.detunings) == 1:
            # a single cycle is forest-independent, so its canonical value
            # must match exactly (multi-cycle bases are forest-dependent)
            base = result.detunings[0].value
            if abs(alt.detunings[0].value - base) > 1e-12 * (1.0 + abs(base)):
                invariant = False

    psi0 = basis_state(h, min(h.level_indices))
    horizon = args.horizon if args.horizon is not None else default_horizon(h)
    step = args.step if args.step is not None else default_step(h, horizon)
    lab = propagate_lab(h, psi0, t_final=horizon, step=step)
    try:
        framed = propagate_frame(h, result.frame, psi0, t_final=horizon, step=step)
    except FrameResidualError as exc:
        detunings = "; ".join(
            f"{d.as_string()} = {_fmt(d.value)}" for d in result.nonzero_detunings
        )
        print(f"verify: FAIL: {exc}", file=sys.stderr)
        if detunings:
            print(f"verify: nonzero detunings: {detunings}", file=sys.stderr)
        return EXIT_VERIFY

    deviation = compare_populations(lab, framed)
    ok = deviation <= args.tolerance and invariant

    if args.format == "machine":
        print(json.dumps(
            {
                "command": "verify",
                "pass": ok,
                "max_population_deviation": deviation,
                "tolerance": args.tolerance,
                "invariance_trials": trials,
                "invariance_ok": invariant,
                "norm_drift_lab": lab.norm_drift,
                "norm_drift_frame": framed.norm_drift,
            },
            sort_keys=True,
        ))
    else:
        print(f"max population deviation: {_fmt(deviation)} "
              f"(tolerance {_fmt(args.tolerance)})")
        print(f"lab norm drift: {_fmt(lab.norm_drift)}")
        print(f"invariance probe ({trials} randomized forests/gauges): "
              + ("ok" if invariant else "MISMATCH"))
        print("verify: " + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotframe",
        description="Decide whether a driven N-level system admits a "
        "time-independent rotating frame; compute the frame, the detuning "
        "conditions, and verify by direct time evolution.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="system-description JSON file")
        p.add_argument("--format", choices=("human", "machine"), default="human")

    p = sub.add_parser("analyze", help="classification report")
    common(p)
    p.add_argument("--gauge", type=int, default=None, help="level index pinned to 0")
    p.add_argument("--tolerance", type=float, default=DETUNING_EPS_REL,
                   help="relative zero-threshold for detuning values")
    p.add_argument("--export", default=None, help="re-emit the parsed system to a file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("transform", help="transformed-Hamiltonian dump")
    common(p)
    p.add_argument("--gauge", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=DETUNING_EPS_REL)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("census", help="classification table for all patterns of N levels")
    common(p, needs_input=False)
    p.add_argument("--levels", type=int, required=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("simulate", help="lab-frame population traces")
    common(p)
    p.add_argument("--initial", type=int, default=None,
                   help="level index initially populated (default: lowest)")
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="lab vs frame propagation, pass/fail")
    common(p)
    p.add_argument("--gauge", type=int, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=DEFAULT_VERIFY_TOL)
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the randomized invariance probe")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
