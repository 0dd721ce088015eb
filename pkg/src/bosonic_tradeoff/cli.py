"""Command-line front end.

Exit codes:
    0  success
    2  invalid flags or parameter values
    3  infeasible target rate
    4  oracle verification failed
"""

import argparse
import logging
import sys

from . import __version__, channel, finite_dim, fock, regions, rule_of_thumb, serialize
from .errors import DomainError, IncompatibleFrontiersError, InfeasibleError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_records(records, args, meta=None):
    if args.format == "json":
        doc = {"metadata": dict(meta or {}, version=__version__), "records": records}
        _emit(serialize.to_json(doc), args.output)
    else:
        _emit(serialize.records_to_csv(records), args.output)


def cmd_capacities(args):
    eta, ns = args.eta, args.ns
    ea_rate, ea_cost = channel.ea_classical_capacity(eta, ns)
    records = [
        {"quantity": "classical_capacity", "value": channel.classical_capacity(eta, ns)},
        {"quantity": "quantum_capacity", "value": channel.quantum_capacity(eta, ns)},
        {"quantity": "quantum_capacity_limit", "value": channel.quantum_capacity_limit(eta)},
        {"quantity": "ea_classical_capacity", "value": ea_rate},
        {"quantity": "ea_ebit_cost", "value": ea_cost},
    ]
    _emit_records(records, args, {"eta": eta, "ns": ns})
    return EXIT_OK


def cmd_frontier(args):
    meta = {"eta": args.eta, "ns": args.ns, "grid": args.grid}
    if args.slice == "bounds":
        lam = regions.lambda_grid(args.grid)
        bound_fn = regions.cqe_bounds if args.region == "cqe" else regions.rps_bounds
        records = []
        for l in lam:
            b = bound_fn(args.eta, args.ns, l)
            records.append({"lambda": l, "bound1": b.b1, "bound2": b.b2, "bound3": b.b3})
        meta["region"] = args.region.upper()
        _emit_records(records, args, meta)
        return EXIT_OK

    if args.baseline == "timeshare":
        a, b = regions.slice_corners(args.slice, args.eta, args.ns)
        region, labels, _ = regions.SLICES[args.slice]
        front = regions.timeshare_frontier(a, b, grid=args.grid, region=region, labels=labels)
    elif args.baseline == "realloc":
        front = regions.timeshare_realloc_frontier(args.slice, args.eta, args.ns, grid=min(args.grid, 128))
    else:
        front = regions.frontier(args.slice, args.eta, args.ns, grid=args.grid)
    if args.format == "json":
        _emit(serialize.frontier_to_json(front, **meta), args.output)
    else:
        _emit(serialize.frontier_to_csv(front), args.output)
    return EXIT_OK


def cmd_compare(args):
    eta, ns, target = args.eta, args.ns, args.target
    first, lam = regions.max_first_given_second(args.slice, eta, ns, target, grid=args.grid)
    a, b = regions.slice_corners(args.slice, eta, ns)
    second = -target if args.slice == "ce" else target
    ts_first = regions.timeshare_first_at(a, b, second)
    rec = {
        "slice": args.slice,
        "target": target,
        "tradeoff_rate": first,
        "tradeoff_lambda": lam,
        "timeshare_rate": ts_first,
        "gain_over_timeshare": first - ts_first,
    }
    if args.slice == "ce":
        gm = regions.gain_metrics((first, target), (a[0], -a[1]))
        rec.update(
            {
                "ea_rate": a[0],
                "ea_consumption": -a[1],
                "rate_difference": gm.difference[0],
                "consumption_difference": gm.difference[1],
                "rate_db_decrease": gm.db_decrease[0],
                "consumption_db_decrease": gm.db_decrease[1],
            }
        )
    _emit_records([rec], args, {"eta": eta, "ns": ns, "grid": args.grid})
    return EXIT_OK


def cmd_rule_of_thumb(args):
    eta, ns, eps = args.eta, args.ns, args.epsilon
    lam = rule_of_thumb.lambda_star(eta, ns, eps)
    rec = {
        "epsilon": eps,
        "lambda_star": lam,
        "photons": lam * ns,
        "quantum_capacity_limit": channel.quantum_capacity_limit(eta),
        "taylor_lower_bound": rule_of_thumb.taylor_lower_bound(eta, ns, lam),
        "quantum_rate": channel.quantum_capacity(eta, lam * ns),
    }
    _emit_records([rec], args, {"eta": eta, "ns": ns})
    return EXIT_OK


def cmd_verify(args):
    report = fock.verify_cqe_entropies(args.eta, args.ns, args.lam, cutoff=args.cutoff, tol=args.tol)
    if args.format == "json":
        _emit(serialize.to_json(report.to_dict()), args.output)
    else:
        recs = [
            {"quantity": c.name, "expected": c.expected, "observed": c.observed, "deviation": c.deviation}
            for c in report.checks
        ]
        _emit(serialize.records_to_csv(recs), args.output)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        print(f"verification failed (max deviation {report.max_deviation:.3e} > {args.tol:g}): {names}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_fd_eval(args):
    ch, ens = finite_dim.load_instance(args.input)
    rates = finite_dim.hsieh_wilde_rates(ch, ens)
    b = finite_dim.cqe_region_bounds_fd(ch, ens)
    rec = {
        "bits": rates.bits,
        "qubits": rates.qubits,
        "ebits": rates.ebits,
        "bound1": b.b1,
        "bound2": b.b2,
        "bound3": b.b3,
    }
    _emit_records([rec], args, {"input": args.input})
    return EXIT_OK


def cmd_minkowski(args):
    fronts = [serialize.load_frontier(p) for p in args.frontiers]
    total = fronts[0]
    for f in fronts[1:]:
        total = regions.minkowski_sum(total, f)
    if args.format == "json":
        _emit(serialize.frontier_to_json(total, inputs=list(args.frontiers)), args.output)
    else:
        _emit(serialize.frontier_to_csv(total), args.output)
    return EXIT_OK


def _common(p, channel_args=True):
    if channel_args:
        p.add_argument("--eta", type=float, required=True, help="channel transmissivity")
        p.add_argument("--ns", type=float, required=True, help="mean input photon number per use")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default=None, help="output path (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bosonic-tradeoff",
        description="Trade-off capacity regions of the pure-loss bosonic channel.",
        epilog="exit codes: 0 ok, 2 usage error, 3 infeasible target, 4 verification failure",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacities", help="single-task capacities")
    _common(p)
    p.set_defaults(func=cmd_capacities)

    p = sub.add_parser("frontier", help="trace a trade-off frontier or the bound triples")
    _common(p)
    p.add_argument("--slice", choices=("cq", "ce", "rp", "bounds"), default="cq")
    p.add_argument("--region", choices=("cqe", "rps"), default="cqe", help="region for --slice bounds")
    p.add_argument("--grid", type=int, default=regions.DEFAULT_GRID, help="number of log-spaced lambda points")
    p.add_argument(
        "--baseline",
        choices=("none", "timeshare", "realloc"),
        default="none",
        help="emit a time-sharing baseline instead of the trade-off frontier",
    )
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("compare", help="trade-off coding vs time-sharing at a target rate")
    _common(p)
    p.add_argument("--slice", choices=("cq", "ce", "rp"), default="cq")
    p.add_argument("--target", type=float, required=True, help="qubit/private rate, or ebits consumed for ce")
    p.add_argument("--grid", type=int, default=regions.DEFAULT_GRID)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rule-of-thumb", help="photon fraction needed to get within epsilon of Q_max")
    _common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_rule_of_thumb)

    p = sub.add_parser("verify", help="truncated Fock-space check of the closed-form entropies")
    _common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--cutoff", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fd-eval", help="rates and bounds for a finite-dimensional instance file")
    _common(p, channel_args=False)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_fd_eval)

    p = sub.add_parser("minkowski", help="Minkowski sum of frontier files (CSV or JSON)")
    _common(p, channel_args=False)
    p.add_argument("frontiers", nargs="+")
    p.set_defaults(func=cmd_minkowski)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, IncompatibleFrontiersError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
