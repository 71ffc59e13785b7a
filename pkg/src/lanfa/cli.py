"""Command-line entry point: run experiments from JSON configs, reproduce the
built-in figure experiments, run verification suites, and launch sweeps."""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .errors import LanfaError


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="lanfa",
        description="Krylov matrix-function experiment harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("--config", required=True, help="path to a JSON config")
    p_run.add_argument("--out", required=True, help="output run directory")

    p_fig = sub.add_parser("fig", help="run a built-in figure experiment")
    p_fig.add_argument("--id", required=True, choices=list("12345"))
    p_fig.add_argument("--out", required=True, help="output run directory")

    p_ver = sub.add_parser("verify", help="run an invariant verification suite")
    p_ver.add_argument(
        "--suite",
        required=True,
        choices=["lemmas", "bounds", "indefinite", "hard_instance"],
    )

    p_sw = sub.add_parser("sweep", help="adversarial (kappa, q) ratio sweep")
    p_sw.add_argument("--func", default="inv_power", choices=["inv_power"])
    p_sw.add_argument("--qs", default="1,2,4,8,16,32,64")
    p_sw.add_argument("--kappas", default="1e2,1e3,1e4,1e5,1e6")
    p_sw.add_argument(
        "--method", default="lanczos_fa", choices=["lanczos_fa", "lanczos_or", "both"]
    )
    p_sw.add_argument("--d", type=int, default=100)
    p_sw.add_argument("--kmax", type=int, default=12)
    p_sw.add_argument("--budget", type=int, default=6)
    p_sw.add_argument("--seed", type=int, default=2718)
    p_sw.add_argument("--out", required=True, help="output run directory")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except LanfaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args):
    if args.command == "run":
        with open(args.config) as fh:
            try:
                config = json.load(fh)
            except json.JSONDecodeError as exc:
                print(f"error: config parse failure: {exc}", file=sys.stderr)
                return 2
        rows = harness.run(config, args.out)
        print(f"wrote {len(rows)} rows to {args.out}/report.csv")
        return 0

    if args.command == "fig":
        config = harness.fig_config(args.id)
        rows = harness.run(config, args.out)
        print(f"wrote {len(rows)} rows to {args.out}/report.csv")
        return 0

    if args.command == "verify":
        report = harness.verify(args.suite)
        for check in report["checks"]:
            mark = "pass" if check["ok"] else "FAIL"
            print(
                f"[{mark}] {check['name']}: deviation {check['deviation']:.3e}"
                f" (threshold {check['threshold']:.3e})"
            )
        n_ok = sum(1 for c in report["checks"] if c["ok"])
        print(f"suite {args.suite}: {n_ok}/{len(report['checks'])} checks passed")
        return 0 if report["ok"] else 1

    if args.command == "sweep":
        methods = ["lanczos_fa", "lanczos_or"] if args.method == "both" else [args.method]
        config = {
            "experiment": "sweep",
            "func": args.func,
            "methods": methods,
            "qs": [int(q) for q in args.qs.split(",")],
            "kappas": [float(k) for k in args.kappas.split(",")],
            "d": args.d,
            "k_max": args.kmax,
            "budget": args.budget,
            "seed": args.seed,
        }
        rows = harness.run(config, args.out)
        print(f"wrote {len(rows)} rows to {args.out}/report.csv")
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
