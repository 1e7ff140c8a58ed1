"""Command-line front end.

    klts verify [--config PATH] [--seed N] [--json OUT]
    klts scenario run NAME [--config PATH] [--out DIR]
    klts table [--config PATH] [--out FILE]

Exit codes: 0 success, 1 property failure, 2 usage/config error. The JSON
report is byte-deterministic for a fixed seed: per-check runtimes go to the
console only, and the environment stamp carries version strings, never
timestamps. KLTS_THREADS caps check-level parallelism; the record order is
fixed either way.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time

import numpy as np

from . import __version__
from .errors import ConfigInvalid, KltsError, UnknownScenario
from .scenarios import ScenarioConfig, run_scenario, write_table
from .verification import CHECKS, check_rng, max_workers_from_env

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def load_config(path) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig()
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigInvalid(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
    return ScenarioConfig.from_dict(raw)


def environment_stamp() -> dict:
    return {
        "package": f"klts {__version__}",
        "python": platform.python_version(),
        "numpy": np.__version__,
        "rng": "Philox4x64-10, key = seed * 2^16 + check index",
    }


def verification_report(seed: int, tolerances, max_workers=None):
    """Run the suite and return (report dict, runtimes list, overall pass)."""
    from concurrent.futures import ThreadPoolExecutor

    from .verification import PropertyRecord

    def run_one(item):
        index, (name, group, fn) = item
        start = time.perf_counter()
        identity, samples, max_error, tolerance = fn(check_rng(seed, index), tolerances)
        elapsed = time.perf_counter() - start
        rec = PropertyRecord(name=name, group=group, identity=identity, samples=samples,
                             max_error=float(max_error), tolerance=float(tolerance),
                             passed=bool(max_error <= tolerance))
        return rec, elapsed

    items = list(enumerate(CHECKS))
    workers = max_workers if max_workers is not None else max_workers_from_env()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_one, items))
    else:
        outcomes = [run_one(item) for item in items]
    records = [rec for rec, _ in outcomes]
    runtimes = [elapsed for _, elapsed in outcomes]
    report = {
        "seed": seed,
        "overall_pass": all(r.passed for r in records),
        "environment": environment_stamp(),
        "records": [r.as_dict() for r in records],
    }
    return report, records, runtimes


def cmd_verify(args) -> int:
    config = load_config(args.config)
    seed = config.seed if args.seed is None else args.seed
    tolerances = config.tolerances()
    report, records, runtimes = verification_report(seed, tolerances)
    for rec, elapsed in zip(records, runtimes):
        flag = "PASS" if rec.passed else "FAIL"
        print(f"{flag}  {rec.group}.{rec.name}: max error {rec.max_error:.3e} "
              f"<= {rec.tolerance:.1e} ({rec.samples} samples, {elapsed * 1e3:.0f} ms)")
    print(f"{'PASS' if report['overall_pass'] else 'FAIL'}  overall "
          f"({len(records)} properties, seed {seed})")
    if args.json:
        out_dir = os.path.dirname(os.path.abspath(args.json))
        os.makedirs(out_dir, exist_ok=True)
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if report["overall_pass"] else EXIT_PROPERTY_FAILURE


def cmd_scenario(args) -> int:
    config = load_config(args.config)
    summary = run_scenario(args.name, config, args.out)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK if summary.get("pass", False) else EXIT_PROPERTY_FAILURE


def cmd_table(args) -> int:
    config = load_config(args.config)
    write_table(config, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klts",
        description="Curvilinear thermomechanical kernels: verification suites, "
                    "benchmark scenarios and linearization tables.")
    parser.add_argument("--version", action="version", version=f"klts {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the oracle-backed property suite")
    p_verify.add_argument("--config", default=None, help="JSON config path")
    p_verify.add_argument("--seed", type=int, default=None, help="RNG seed (overrides config)")
    p_verify.add_argument("--json", default=None, help="write the JSON report here")
    p_verify.set_defaults(fn=cmd_verify)

    p_scn = sub.add_parser("scenario", help="run a named benchmark scenario")
    scn_sub = p_scn.add_subparsers(dest="scenario_command", required=True)
    p_run = scn_sub.add_parser("run", help="execute one scenario")
    p_run.add_argument("name", help="scenario name")
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.set_defaults(fn=cmd_scenario)

    p_table = sub.add_parser("table", help="emit the linearization/response CSV")
    p_table.add_argument("--config", default=None)
    p_table.add_argument("--out", required=True, help="output CSV path")
    p_table.set_defaults(fn=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, matching the config-error code
        return int(exc.code) if exc.code is not None else EXIT_CONFIG_ERROR
    try:
        return args.fn(args)
    except (ConfigInvalid, UnknownScenario) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except KltsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY_FAILURE


if __name__ == "__main__":
    sys.exit(main())
