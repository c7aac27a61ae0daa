#!/usr/bin/env python3
"""
Script for running spinlab computations from the command line
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import logging
import sys

# Local imports
from .config import default_cores
from .errors import DomainError, NumericError
from .fock import Direction, OrthogonalTriplet, collective_spin, separability_label
from .interferometer import draw_seed, mle_estimate
from .moments import mixture_spin_moments, number_state_moments, spin_moments
from .oracle import run_suite
from .qfi import qfi_diagonal_mixture, qfi_number_state, qfi_spectral
from .squeezing import ineq3_threshold, toth_check, xi_parameters
from .state_io import (
    RunRecord,
    SpecParseError,
    StateSpec,
    load_state_file,
    parse_direction,
    parse_state_spec,
    parse_triplet,
    to_jsonable,
)

EXIT_USAGE = 2
EXIT_NUMERIC = 3
MEASURES = ("toth", "xi", "qfi", "moments")


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def read_state(args) -> StateSpec:
    if args.state_file is not None:
        return load_state_file(args.state_file)
    return parse_state_spec(args.state)


def closed_form_moments(spec, state, direction):
    if spec.is_number_state():
        return number_state_moments(spec.n, spec.params.k, direction)
    if spec.kind == "mixture":
        return mixture_spin_moments(state, direction)
    return None


def closed_form_qfi(spec, state, direction):
    if spec.is_number_state():
        return qfi_number_state(spec.n, spec.params.k, direction)
    if spec.kind == "mixture":
        return qfi_diagonal_mixture(state, direction)
    return None


def moments_payload(spec, direction):
    state = spec.build()
    oracle = spin_moments(state, collective_spin(spec.n, direction))
    closed = closed_form_moments(spec, state, direction)
    diff = None
    if closed is not None:
        diff = max(
            abs(closed.mean - oracle.mean),
            abs(closed.second_moment - oracle.second_moment),
            abs(closed.variance - oracle.variance),
        )
    return {
        "separability": separability_label(state),
        "closed_form": closed,
        "oracle": oracle,
        "difference": diff,
    }


def squeeze_payload(spec, triplet):
    state = spec.build()
    return {
        "separability": separability_label(state),
        "toth": toth_check(state, triplet),
        "xi": xi_parameters(state, triplet),
        "ineq3_threshold": ineq3_threshold(state) if spec.is_diagonal() else None,
    }


def qfi_payload(spec, direction):
    state = spec.build()
    spectral = qfi_spectral(state, collective_spin(spec.n, direction))
    closed = closed_form_qfi(spec, state, direction)
    return {
        "closed_form": closed,
        "spectral": spectral,
        "difference": None if closed is None else abs(closed.value - spectral.value),
    }


def scan_values(args):
    """
    Return the values of the scanned parameter, from `--values` or `--range`.
    """
    if args.values is not None:
        try:
            values = [float(x) for x in args.values.split(",") if x.strip()]
        except ValueError as e:
            raise SpecParseError("--values expects comma-separated numbers") from e
    else:
        try:
            start, stop, step = (float(x) for x in args.range.split(":"))
        except ValueError as e:
            raise SpecParseError("--range expects start:stop:step") from e
        if step <= 0:
            raise SpecParseError("--range step must be positive")
        count = int((stop - start) / step + 0.5) + 1 if stop >= start else 0
        values = [start + i * step for i in range(count)]
    if not values:
        raise SpecParseError("empty scan range")
    return values


def format_value(value):
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def scan_row(job):
    """
    Evaluate one row of a scan. Module level, so that it can run in a worker process.
    """
    template, param, value, measure, direction, triplet = job
    if param == "n3z2":
        triplet = OrthogonalTriplet.with_n3z(value)
    elif param == "nz2":
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"nz² must lie in [0, 1], got {value}")
        direction = Direction((1.0 - value) ** 0.5, 0.0, value**0.5)
    names = {param: format_value(value), f"{param}_half": int(value) // 2}
    try:
        spec = parse_state_spec(template.format(**names))
    except (KeyError, IndexError) as e:
        raise SpecParseError(f"unknown placeholder {e} in state template") from e

    if measure == "toth":
        r = toth_check(spec.build(), triplet)
        return [
            value,
            *(r.lhs1, r.lhs2, r.lhs3, r.lhs4),
            *(r.satisfied1, r.satisfied2, r.satisfied3, r.satisfied4),
        ]
    if measure == "xi":
        r = xi_parameters(spec.build(), triplet)
        return [value, r.xi_w_squared, r.xi_s_squared]
    if measure == "qfi":
        p = qfi_payload(spec, direction)
        closed = p["closed_form"]
        return [value, spec.n, p["spectral"].value, None if closed is None else closed.value]
    r = moments_payload(spec, direction)["oracle"]
    return [value, r.mean, r.second_moment, r.variance]


SCAN_HEADERS = {
    "toth": [*(f"lhs{i}" for i in range(1, 5)), *(f"satisfied{i}" for i in range(1, 5))],
    "xi": ["xi_w_squared", "xi_s_squared"],
    "qfi": ["n", "qfi_spectral", "qfi_closed_form"],
    "moments": ["mean", "second_moment", "variance"],
}


def run_scan(args):
    direction = parse_direction(args.dir)
    triplet = parse_triplet(args.triplet)
    jobs = [
        (args.state, args.param, v, args.measure, direction, triplet)
        for v in scan_values(args)
    ]
    if args.cores > 1:
        with ProcessPoolExecutor(max_workers=args.cores) as pool:
            rows = list(pool.map(scan_row, jobs))
    else:
        rows = [scan_row(job) for job in jobs]

    out = sys.stdout if args.output is None else open(args.output, "w", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([args.param, *SCAN_HEADERS[args.measure]])
        for row in rows:
            writer.writerow(["" if x is None else to_jsonable(x) for x in row])
    finally:
        if out is not sys.stdout:
            out.close()


def add_state_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", "-s", type=str, help="Inline state, e.g. fock:4:1")
    group.add_argument("--state-file", "-f", type=str, help="JSON state specification")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spinlab",
        description="Spin squeezing and quantum Fisher information of N bosonic qubits",
        epilog="Results are written to stdout as JSON (or CSV for scans)",
    )

    # Global settings
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose output")
    parser.add_argument(
        "--cores",
        "-j",
        type=positive_int,
        default=None,
        help="number of worker processes (default: SPINLAB_CORES or 1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="Mean and variance of a collective spin")
    add_state_arguments(p)
    p.add_argument("--dir", "-d", type=str, default="0,0,1", help="Direction x,y,z")

    p = sub.add_parser("squeeze", help="Spin-squeezing inequalities and parameters")
    add_state_arguments(p)
    p.add_argument(
        "--triplet",
        "-t",
        type=str,
        default="auto-z",
        help="auto-x|auto-y|auto-z, axis letters such as z,y,x, or three ;-separated vectors",
    )

    p = sub.add_parser("qfi", help="Quantum Fisher information")
    add_state_arguments(p)
    p.add_argument("--dir", "-d", type=str, default="0,1,0", help="Generator direction")

    p = sub.add_parser("scan", help="Sweep one parameter and write a CSV table")
    p.add_argument(
        "--state", "-s", type=str, required=True, help="State template, e.g. fock:{N}:{N_half}"
    )
    p.add_argument(
        "--param", "-p", type=str, required=True, help="n3z2, nz2, or a template name"
    )
    values = p.add_mutually_exclusive_group(required=True)
    values.add_argument("--range", "-r", type=str, help="start:stop:step (inclusive)")
    values.add_argument("--values", type=str, help="Comma-separated values")
    p.add_argument("--measure", "-m", choices=MEASURES, default="toth")
    p.add_argument("--dir", "-d", type=str, default="0,1,0", help="Direction x,y,z")
    p.add_argument("--triplet", "-t", type=str, default="auto-z", help="Triplet")
    p.add_argument("--output", "-o", type=str, help="Output file (default=stdout)")

    p = sub.add_parser("estimate", help="Monte Carlo maximum-likelihood phase estimation")
    add_state_arguments(p)
    p.add_argument("--rot-dir", type=str, default="0,1,0", help="Rotation direction")
    p.add_argument("--meas-dir", type=str, default="0,0,1", help="Measured direction")
    p.add_argument("--theta", type=float, required=True, help="True phase in (0, π/2)")
    p.add_argument("--shots", "-M", type=positive_int, default=200)
    p.add_argument("--reps", "-R", type=positive_int, default=400)
    p.add_argument("--seed", type=int, help="64-bit seed (default: drawn from entropy)")

    p = sub.add_parser("oracle", help="Brute-force checks on distinguishable qubits")
    p.add_argument("--n", "-n", type=int, default=4, help="Number of qubits (at most 8)")
    p.add_argument("--trials", type=positive_int, default=100)
    p.add_argument("--seed", type=int, help="Seed (default: drawn from entropy)")
    return parser


def run_command(args):
    """
    Run the parsed command and return its RunRecord (None for scans, which write CSV).
    """
    if args.command == "scan":
        run_scan(args)
        return None
    if args.command == "oracle":
        seed = draw_seed() if args.seed is None else args.seed
        summary = run_suite(args.n, args.trials, seed)
        return RunRecord(
            command="oracle",
            inputs={"n": args.n, "trials": args.trials},
            outputs=to_jsonable(summary),
            seed=seed,
        )

    spec = read_state(args)
    inputs = {"state": spec.model_dump()}
    if args.command == "moments":
        direction = parse_direction(args.dir)
        inputs["dir"] = direction.vector.tolist()
        outputs = moments_payload(spec, direction)
    elif args.command == "squeeze":
        triplet = parse_triplet(args.triplet)
        inputs["triplet"] = [d.vector.tolist() for d in triplet.directions]
        outputs = squeeze_payload(spec, triplet)
    elif args.command == "qfi":
        direction = parse_direction(args.dir)
        inputs["dir"] = direction.vector.tolist()
        outputs = qfi_payload(spec, direction)
    else:
        rot_dir = parse_direction(args.rot_dir, "--rot-dir")
        meas_dir = parse_direction(args.meas_dir, "--meas-dir")
        inputs |= {
            "rot_dir": rot_dir.vector.tolist(),
            "meas_dir": meas_dir.vector.tolist(),
            "theta": args.theta,
            "shots": args.shots,
            "reps": args.reps,
        }
        outputs = mle_estimate(
            spec.build(),
            rot_dir,
            args.theta,
            args.shots,
            args.reps,
            seed=args.seed,
            meas_dir=meas_dir,
            cores=args.cores,
        )
        return RunRecord(
            command=args.command,
            inputs=inputs,
            outputs=to_jsonable(outputs),
            seed=outputs.seed,
        )
    return RunRecord(command=args.command, inputs=inputs, outputs=to_jsonable(outputs))


def __main__(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cores is None:
        args.cores = default_cores()

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )

    record = run_command(args)
    if record is not None:
        print(record.to_json())


def main(argv=None):
    """Entry point for the spinlab console script; returns the exit code."""
    try:
        __main__(argv)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except DomainError as e:
        print(f"spinlab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as e:
        print(f"spinlab: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
