"""Command line front end.

Flags mirror the flat key=value config file; flags win over the file.  Exit
codes: 0 all gated checks passed, 1 some check failed, 2 configuration
error.
"""

import argparse
import json as _json
import os
import sys

import numpy as np

from .bogoliubov import implementation_residual
from .errors import ConfigError, LoopfockError
from .linalg import dump_matrix, maxabs
from .loops import is_half_supported, lift, loop_from_bivectors, omega_matrix
from .report import SUITE_NAMES, RunConfig
from .suites import Environment, run


def _parse_args(argv):
    ap = argparse.ArgumentParser(prog="loopfock",
                                 description="Numerical verification suites for the lattice "
                                             "loop model and its operator algebras.")
    ap.add_argument("--config", help="flat key=value file with the same keys as the flags")
    ap.add_argument("--points", type=int, help="number of circle vertices (= 2n, even)")
    ap.add_argument("--dim", type=int, help="internal dimension d")
    ap.add_argument("--seed", type=int, help="64-bit seed for all sampled checks")
    ap.add_argument("--suite", action="append", choices=SUITE_NAMES + ("all",),
                    help="suite to run (repeatable; default: all)")
    ap.add_argument("--samples", type=int, help="sample count for scalable checks")
    ap.add_argument("--tol", type=float, help="pass gate for checks without a stricter stated bound")
    ap.add_argument("--report", help="report file path")
    ap.add_argument("--format", choices=("json", "md"), help="report format")
    ap.add_argument("--dump", help="write model matrices (generators, grading, Lagrangian) to this path")
    ap.add_argument("--loop", help="loop literal: JSON (inline or a file path) with one "
                                   "bivector-coordinate list per vertex; prints lift diagnostics")
    return ap.parse_args(argv)


def _read_config_file(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


_INT_KEYS = {"points", "dim", "seed", "samples"}
_FLOAT_KEYS = {"tol"}


def build_config(argv):
    args = _parse_args(argv)
    values = {}
    if args.config:
        values.update(_read_config_file(args.config))
    for key in ("points", "dim", "seed", "samples", "tol", "report", "format", "dump", "loop"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if args.suite:
        values["suite"] = ",".join(args.suite)
    kwargs = {}
    if "points" in values:
        points = int(values["points"])
        if points < 2 or points % 2 == 1:
            raise ConfigError("--points must be a positive even vertex count (= 2n)")
        kwargs["n"] = points // 2
    if "dim" in values:
        kwargs["d"] = int(values["dim"])
    if "seed" in values:
        kwargs["seed"] = int(values["seed"])
    if "samples" in values:
        kwargs["samples"] = int(values["samples"])
    if "tol" in values:
        kwargs["gate"] = float(values["tol"])
    if "report" in values:
        kwargs["report_path"] = str(values["report"])
    if "format" in values:
        kwargs["report_format"] = str(values["format"])
    if "dump" in values:
        kwargs["dump_path"] = str(values["dump"])
    if "suite" in values:
        suites = tuple(s for s in str(values["suite"]).split(",") if s)
        if "all" in suites:
            suites = SUITE_NAMES
        kwargs["suites"] = suites
    loop_literal = values.get("loop")
    return RunConfig(**kwargs).validate(), loop_literal


def _write_dump(config, path):
    env = Environment(config)
    model = env.model
    with open(path, "w") as fh:
        dump_matrix(model.lagrangian, fh, name="lagrangian")
        dump_matrix(model.grading, fh, name="grading")
        for i, g in enumerate(model.generators):
            point, axis = divmod(i, model.d)
            dump_matrix(g, fh, name=f"generator vertex {point} axis {axis}")


def _describe_loop(config, literal):
    """Lift a loop literal and print its diagnostics."""
    text = literal
    if os.path.exists(literal):
        with open(literal) as fh:
            text = fh.read()
    try:
        coords = _json.loads(text)
    except ValueError as exc:
        raise ConfigError(f"loop literal is not valid JSON: {exc}")
    env = Environment(config)
    model = env.model
    if not isinstance(coords, list) or len(coords) != 2 * config.n:
        raise ConfigError(f"loop literal must list {2 * config.n} vertices")
    loop = loop_from_bivectors(env.ctx.spin, coords)
    ext = lift(model, env.ctx.spin, loop, env.tol)
    g = omega_matrix(model, env.ctx.spin, loop)
    G = model.grading
    print(f"loop lift: implementer residual {implementation_residual(model, ext.unitary, g):.3e}, "
          f"parity {ext.implementer.parity}, "
          f"vacuum overlap {ext.unitary[0, 0]:.6f}, "
          f"grading commutator {maxabs(ext.unitary @ G - G @ ext.unitary):.3e}, "
          f"half supported: {is_half_supported(loop, env.tol)}")
    if config.dump_path:
        with open(config.dump_path, "a") as fh:
            dump_matrix(ext.unitary, fh, name="loop implementer")
    return 0


def main(argv=None):
    try:
        config, loop_literal = build_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if config.dump_path:
        _write_dump(config, config.dump_path)
    if loop_literal is not None:
        try:
            return _describe_loop(config, loop_literal)
        except (ConfigError, LoopfockError, ValueError) as exc:
            print(f"configuration error: {exc}", file=sys.stderr)
            return 2
    code, records, summary = run(config)
    for r in records:
        status = "info" if r.exploratory else ("pass" if r.passed else "FAIL")
        print(f"[{status:4s}] {r.suite:10s} {r.name:38s} residual {r.residual:.3e}")
    print(f"{summary['passed']} passed, {summary['failed']} failed, "
          f"{summary['exploratory']} exploratory.")
    if config.report_path:
        print(f"report written to {config.report_path}")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
