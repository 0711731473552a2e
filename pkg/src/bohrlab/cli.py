"""``bohrlab`` command line: run suites, write reports, emit plot tables."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import modular
from .errors import BohrLabError, IoFailure, MissingData, UnknownSuite
from .records import VerificationReport
from .series import DEFAULT_ORDER, bohr_majorant

FORMATS = ("json", "csv")
PLOT_KINDS = ("bohr-vs-radius", "modular-coefficients", "margin-histogram")


@dataclass
class RunConfig:
    order: int = DEFAULT_ORDER
    tolerance_overrides: dict = field(default_factory=dict)
    suites: list = field(default_factory=lambda: ["all"])
    output_format: str = "json"
    output_path: str | None = None
    seed: int = 42

    def __post_init__(self):
        if self.order < 8:
            raise ValueError(f"order must be at least 8, got {self.order}")
        if self.output_format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if not self.suites:
            raise ValueError("at least one suite is required")

    def to_json(self) -> dict:
        # the output path is left out so reports do not depend on where they are written
        return {
            "order": self.order,
            "seed": self.seed,
            "suites": list(self.suites),
            "tolerance_overrides": dict(sorted(self.tolerance_overrides.items())),
        }


def _suite_table() -> dict:
    from .lab.theorems import SUITES
    return SUITES


def expand_suites(names) -> list[str]:
    table = _suite_table()
    out = []
    for name in names:
        if name == "all":
            out += list(table)
        elif name in table:
            out.append(name)
        else:
            raise UnknownSuite(f"unknown suite {name!r}")
    return list(dict.fromkeys(out))


def _apply_tolerances(records, overrides: dict):
    """Re-judge records whose name starts with an override key (longest key wins)."""
    if not overrides:
        return records
    keys = sorted(overrides, key=len, reverse=True)
    out = []
    for r in records:
        key = next((k for k in keys if r.name.startswith(k)), None)
        if key is None:
            out.append(r)
            continue
        tol = float(overrides[key])
        meta = dict(r.metadata, tolerance_override=tol)
        out.append(replace(r, passed=bool(r.lhs <= r.rhs + tol), metadata=meta))
    return out


def render(report: VerificationReport, fmt: str) -> str:
    if fmt == "json":
        return report.dumps()
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(report.to_csv_rows())
    return buf.getvalue()


def _write(text: str, path) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def run(config: RunConfig) -> VerificationReport:
    """Run the configured suites and write the report if an output path is set."""
    names = expand_suites(config.suites)
    table = _suite_table()
    records = []
    for name in names:
        records += table[name](config)
    records = _apply_tolerances(records, config.tolerance_overrides)
    report = VerificationReport(config.to_json(), records)
    if config.output_path:
        _write(render(report, config.output_format), config.output_path)
    return report


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def emit_plot_data(report: VerificationReport, kind: str) -> str:
    """CSV table (with header) for ``kind`` built from the report's contents."""
    if kind not in PLOT_KINDS:
        raise ValueError(f"kind must be one of {PLOT_KINDS}")
    if not report.records:
        raise MissingData("report has no records")
    order = int(report.config.get("order", DEFAULT_ORDER))
    if kind == "margin-histogram":
        margins = np.array([r.margin for r in report.records], dtype=float)
        margins = margins[np.isfinite(margins)]
        if margins.size == 0:
            raise MissingData("no finite margins")
        counts, edges = np.histogram(margins, bins=20)
        rows = [["bin_low", "bin_high", "count"]]
        rows += [[repr(float(lo)), repr(float(hi)), int(c)] for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
        return _csv(rows)
    if kind == "modular-coefficients":
        if not any(r.name.startswith("modular:") for r in report.records):
            raise MissingData("report has no modular records")
        exp = modular.coefficients_of_minus_J_minus(order)
        return _csv([["n", "M_n"]] + [[n, m] for n, m in enumerate(exp.exact)])
    # bohr-vs-radius
    from .lab.theorems import corpus
    labels = {r.name[len("theorem:bohr-2d["):-1] for r in report.records if r.name.startswith("theorem:bohr-2d[")}
    entries = [e for e in corpus(order) if e.name in labels]
    if not entries:
        raise MissingData("report has no per-entry main-bound records")
    radii = np.linspace(0.0, 1.0 / 3.0, 100)
    rows = [["r"] + [e.name for e in entries]]
    for r in radii:
        rows.append([repr(float(r))] + [repr(bohr_majorant(e.series, float(r), 1).value) for e in entries])
    return _csv(rows)


def _parse_tolerance(text: str) -> tuple[str, float]:
    name, sep, val = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VAL, got {text!r}")
    try:
        return name, float(val)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad tolerance value in {text!r}") from exc


def read_config_file(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; ``tolerance`` may repeat."""
    out: dict = {"tolerance": []}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"config line without '=': {raw!r}")
        key, val = key.strip(), val.strip()
        if key == "tolerance":
            out["tolerance"].append(_parse_tolerance(val))
        elif key in ("suite", "suites"):
            out["suite"] = [s.strip() for s in val.split(",") if s.strip()]
        else:
            out[key] = val
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--out")
    common.add_argument("--tolerance", action="append", type=_parse_tolerance, default=[], metavar="NAME=VAL")
    common.add_argument("--config", help="key=value file; flags take precedence")

    p = argparse.ArgumentParser(prog="bohrlab", description="Certified Bohr-inequality verification.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", action="append", help="suite name (repeatable or comma separated)")
    sub.add_parser("modular", parents=[common], help="modular-function battery")
    sub.add_parser("hyperbolic", parents=[common], help="hyperbolic-density battery")
    pl = sub.add_parser("plot", parents=[common], help="emit a plot-ready CSV table")
    pl.add_argument("kind", choices=PLOT_KINDS)
    pl.add_argument("--suite", action="append")
    return p


def config_from_args(args) -> RunConfig:
    file_cfg = read_config_file(args.config) if args.config else {"tolerance": []}
    if args.command in ("modular", "hyperbolic"):
        suites = [args.command]
    elif getattr(args, "suite", None):
        suites = [s for item in args.suite for s in item.split(",") if s]
    else:
        suites = file_cfg.get("suite", ["all"])
    tolerances = dict(file_cfg["tolerance"])
    tolerances.update(dict(args.tolerance))
    return RunConfig(
        order=args.order if args.order is not None else int(file_cfg.get("order", DEFAULT_ORDER)),
        tolerance_overrides=tolerances,
        suites=suites,
        output_format=args.format or file_cfg.get("format", "json"),
        output_path=args.out if args.out is not None else file_cfg.get("out"),
        seed=args.seed if args.seed is not None else int(file_cfg.get("seed", 42)),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "plot":
            report = run(replace(cfg, output_path=None))
            text = emit_plot_data(report, args.kind)
            if cfg.output_path:
                _write(text, cfg.output_path)
            else:
                sys.stdout.write(text)
            return 0
        report = run(cfg)
    except (BohrLabError, ValueError) as exc:
        print(f"bohrlab: error: {exc}", file=sys.stderr)
        return 2
    if not cfg.output_path:
        sys.stdout.write(render(report, cfg.output_format))
    print(f"{report.passed} passed, {report.failed} failed", file=sys.stderr)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
