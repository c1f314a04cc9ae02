"""Command-line front end.

Exit codes: 0 success, 1 a check failed or the optimizer did not converge,
2 bad input (diagnostic on stderr).
"""

import argparse
import csv
import io
import json
import os
import sys
import zlib

from . import statefile, verify
from .errors import ConvergenceError, QuditentError
from .measures import measure_report
from .roof import Measure, OptimizerConfig, convex_roof, wootters_concurrence_mixed
from .states import (
    PureState,
    SchmidtForm,
    from_schmidt,
    make_rng,
    projector,
    random_mixed_state,
    random_pure_state,
    random_schmidt_vector,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Raised for bad arguments detected after argparse."""


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_state(path):
    kind, dims, state = statefile.load(path)
    if isinstance(state, SchmidtForm):
        state = from_schmidt(state, dims)
    return state


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return repr(value) if isinstance(value, float) else str(value)


def cmd_measure(args):
    report = measure_report(_load_state(args.input)).to_dict()
    if args.format == "json":
        text = statefile.dumps(report)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.keys())
        writer.writerow(_csv_cell(v) for v in report.values())
        text = buf.getvalue()
    _write(text, args.output)
    return EXIT_OK


def cmd_verify(args):
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    if args.samples < 1:
        raise InputError(f"--samples must be >= 1, got {args.samples}")
    workers = args.workers if args.workers is not None else verify.default_workers()
    if workers < 1:
        raise InputError(f"--workers must be >= 1, got {workers}")
    report = verify.run_campaign(checks, args.dims, args.samples, args.seed, args.tol, workers)
    text = report.to_csv() if args.format == "csv" else statefile.dumps(report.to_dict())
    _write(text, args.output)
    for r in report.results:
        status = "pass" if r.passed else "FAIL"
        print(
            f"{r.check} d={verify._dims_label(r.dims)}: max residual {r.max_residual:.3e} "
            f"(tol {r.tolerance:.0e}) {status}",
            file=sys.stderr,
        )
    return EXIT_OK if report.passed else EXIT_FAIL


def _ensemble_dict(ensemble):
    return [{"p": float(p), "state": statefile.to_dict(psi)["data"]} for p, psi in ensemble.members]


def cmd_roof(args):
    state = _load_state(args.input)
    rho = projector(state) if isinstance(state, PureState) else state
    if args.restarts < 1:
        raise InputError(f"--restarts must be >= 1, got {args.restarts}")
    config = OptimizerConfig(
        ensemble_size=args.ensemble_size,
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        seed=args.seed,
    )
    workers = args.workers if args.workers is not None else verify.default_workers()
    result = convex_roof(rho, Measure(args.measure), config, workers=workers)
    out = {
        "measure": result.measure.value,
        "dims": [rho.dims.m, rho.dims.n],
        "value": result.value,
        "converged": result.converged,
        "restarts_used": result.restarts_used,
        "seed": args.seed,
        "oracle": None,
        "oracle_gap": None,
        "ensemble": _ensemble_dict(result.ensemble),
    }
    if (rho.dims.m, rho.dims.n) == (2, 2):
        # the closed form bounds both roofs on two qubits, where they coincide
        oracle = wootters_concurrence_mixed(rho)
        out["oracle"] = oracle
        out["oracle_gap"] = abs(result.value - oracle)
    _write(statefile.dumps(out), args.output)
    return EXIT_OK if result.converged else EXIT_FAIL


def _sample_one(kind, dims, rank, rng):
    if kind == "pure":
        return statefile.to_dict(random_pure_state(dims, rng))
    if kind == "mixed":
        return statefile.to_dict(random_mixed_state(dims, rank, rng))
    return statefile.to_dict(random_schmidt_vector(dims.d, rng), dims)


def cmd_sample(args):
    dims_list = verify.parse_dims(args.dims)
    if len(dims_list) != 1:
        raise InputError(f"--dims must name a single dimension, got {args.dims!r}")
    dims = dims_list[0]
    rank = args.rank if args.rank is not None else 1
    if args.kind == "mixed" and not 1 <= rank <= dims.total:
        raise InputError(f"--rank must lie in [1, {dims.total}] for {dims}, got {rank}")
    if args.count < 1:
        raise InputError(f"--count must be >= 1, got {args.count}")
    label = verify._dims_label(dims)
    stream = zlib.crc32(f"{args.kind}:{label}:{rank}".encode())
    os.makedirs(args.output, exist_ok=True)
    for j in range(args.count):
        obj = _sample_one(args.kind, dims, rank, make_rng(args.seed, stream, j))
        path = os.path.join(args.output, f"{args.kind}_{label}_{j:05d}.json")
        _write(statefile.dumps(obj), path)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="quditent", description="Bipartite entanglement measures and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="report every measure for one state file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify", help="run randomized identity and bound checks")
    p.add_argument("--checks", default=",".join(verify.CHECKS), help="comma-separated check names")
    p.add_argument("--dims", default=None, help='e.g. "3", "2x3", "2..6" or a comma list')
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="override every check's tolerance")
    p.add_argument("--output", default="-")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roof", help="convex-roof concurrence or negativity of a state file")
    p.add_argument("--input", required=True)
    p.add_argument("--measure", choices=[m.value for m in Measure], default="concurrence")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-iterations", type=int, default=500)
    p.add_argument("--ensemble-size", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_roof)

    p = sub.add_parser("sample", help="write seeded random state files")
    p.add_argument("--kind", choices=("pure", "mixed", "schmidt"), required=True)
    p.add_argument("--dims", required=True)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="output directory")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (QuditentError, InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
