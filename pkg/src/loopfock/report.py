"""Run configuration, check records, and report serialization."""

import json
import math
from dataclasses import dataclass

from .errors import ConfigError

SUITE_NAMES = ("clifford", "bogoliubov", "tomita", "two-group", "string", "rep")
SUITE_ORDER = {name: i for i, name in enumerate(SUITE_NAMES)}


@dataclass(frozen=True)
class RunConfig:
    """One verification run: lattice size, tolerances, seed and output."""

    n: int = 2
    d: int = 2
    eq_tol: float = 1e-9
    rank_tol: float = 1e-11
    gate: float = 1e-8
    seed: int = 2024
    suites: tuple = SUITE_NAMES
    samples: int = 100
    report_path: str | None = None
    report_format: str = "json"
    dump_path: str | None = None
    modes_cap: int = 8

    def validate(self):
        if self.n < 1 or self.d < 1:
            raise ConfigError("n and d must be positive")
        if (self.n * self.d) % 2 == 1:
            raise ConfigError(f"n*d = {self.n * self.d} is odd; the half-circle algebra would not be a factor")
        if self.n * self.d > self.modes_cap:
            raise ConfigError(f"n*d = {self.n * self.d} exceeds the cap {self.modes_cap} "
                              f"(Fock dimension 2^(n*d))")
        for s in self.suites:
            if s not in SUITE_NAMES:
                raise ConfigError(f"unknown suite {s!r}; choose from {SUITE_NAMES}")
        if self.report_format not in ("json", "md"):
            raise ConfigError("format must be json or md")
        if not (0 <= self.rank_tol <= self.eq_tol):
            raise ConfigError("need 0 <= rank_tol <= eq_tol")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        return self

    def ordered_suites(self):
        return tuple(sorted(set(self.suites), key=SUITE_ORDER.__getitem__))


@dataclass
class CheckRecord:
    """Outcome of one verification check."""

    suite: str
    name: str
    anchor: str            # short label of the identity being verified
    residual: float
    tolerance: float       # +inf marks exploratory, never-gating records
    passed: bool
    wall_time: float
    sample_count: int

    @property
    def exploratory(self):
        return math.isinf(self.tolerance)

    def to_dict(self):
        return {
            "suite": self.suite,
            "name": self.name,
            "anchor": self.anchor,
            "residual": self.residual,
            "tolerance": None if self.exploratory else self.tolerance,
            "passed": self.passed,
            "wall_time": self.wall_time,
            "sample_count": self.sample_count,
        }


def summarize(records):
    exploratory = sum(1 for r in records if r.exploratory)
    gated = [r for r in records if not r.exploratory]
    passed = sum(1 for r in gated if r.passed)
    return {
        "total": len(records),
        "passed": passed,
        "failed": len(gated) - passed,
        "exploratory": exploratory,
    }


def config_dict(config):
    return {
        "n": config.n,
        "d": config.d,
        "eq_tol": config.eq_tol,
        "rank_tol": config.rank_tol,
        "gate": config.gate,
        "seed": config.seed,
        "suites": list(config.ordered_suites()),
        "samples": config.samples,
    }


def emit_report(config, records, fmt="json"):
    """Serialize the run; JSON is deterministic up to the wall_time fields."""
    if fmt == "json":
        payload = {
            "config": config_dict(config),
            "records": [r.to_dict() for r in records],
            "summary": summarize(records),
        }
        return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()
    if fmt == "md":
        return _markdown_report(config, records).encode()
    raise ConfigError(f"unknown format {fmt!r}")


def _markdown_report(config, records):
    lines = [f"# Verification report (n={config.n}, d={config.d}, seed={config.seed})", ""]
    summary = summarize(records)
    lines.append(f"{summary['passed']} passed, {summary['failed']} failed, "
                 f"{summary['exploratory']} exploratory, {summary['total']} total.")
    by_suite = {}
    for r in records:
        by_suite.setdefault(r.suite, []).append(r)
    for suite in sorted(by_suite, key=lambda s: SUITE_ORDER.get(s, 99)):
        lines += ["", f"## {suite}", "",
                  "| check | identity | residual | tolerance | status | samples |",
                  "|---|---|---|---|---|---|"]
        for r in by_suite[suite]:
            tol = "reported" if r.exploratory else f"{r.tolerance:.1e}"
            status = "pass" if r.passed else "FAIL"
            if r.exploratory:
                status = "info"
            lines.append(f"| {r.name} | {r.anchor} | {r.residual:.3e} | {tol} | {status} | {r.sample_count} |")
    return "\n".join(lines) + "\n"


def strip_timing(report_bytes):
    """Report bytes with wall_time fields zeroed, for determinism comparisons."""
    payload = json.loads(report_bytes.decode())
    for rec in payload.get("records", []):
        rec["wall_time"] = 0.0
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()
