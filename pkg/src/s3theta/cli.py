"""Command-line front end.

Exit codes: 0 ok, 2 usage, 3 malformed JSON, 4 validation, 5 context
mismatch, 6 numeric failure or resonance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from .algebra import ContextMismatch, DeformationContext, generators
from .chern_simons import Connection, SelfAdjointnessError, action_report
from .partition import ResonanceError, identity_chain, partition_modewise, partition_report
from .spectral import spectrum, spectrum_csv
from .spin import commutator

EXIT_OK, EXIT_USAGE, EXIT_JSON, EXIT_VALIDATION, EXIT_CONTEXT, EXIT_NUMERIC = 0, 2, 3, 4, 5, 6
GOLDEN_CONJ = (math.sqrt(5) - 1) / 2


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    theta: float | None
    dirac: str
    cutoff: int
    level: int
    xi: float | None  # None = 1/(pi k)
    psi: float | str
    tolerance: float
    format: str
    seed: int

    def context(self) -> DeformationContext:
        theta = GOLDEN_CONJ if self.theta is None else self.theta
        return DeformationContext(theta, tol=self.tolerance, rng_seed=self.seed)


def _psi(text):
    if text == "average":
        return text
    val = float(text)
    if not 0 < val < math.pi / 2:
        raise argparse.ArgumentTypeError("psi must lie in (0, pi/2) or be 'average'")
    return val


def _xi(text):
    if text == "auto":
        return None
    val = float(text)
    if val <= 0:
        raise argparse.ArgumentTypeError("xi must be positive or 'auto'")
    return val


def _tolerance(text):
    val = float(text)
    if not 0 < val <= 1e-6:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1e-6]")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta", type=float, default=None)
    common.add_argument("--dirac", choices=["d1", "d2", "d3"], default="d1")
    common.add_argument("--cutoff", type=int, default=3)
    common.add_argument("--level", type=int, default=1)
    common.add_argument("--xi", type=_xi, default=None)
    common.add_argument("--psi", type=_psi, default="average")
    common.add_argument("--tolerance", type=_tolerance, default=1e-10)
    common.add_argument("--format", choices=["json", "csv", "markdown"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="output file, '-' for stdout")

    parser = argparse.ArgumentParser(prog="s3theta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("commutators", parents=[common], help="generator commutator tables")
    sub.add_parser("spectrum", parents=[common], help="Dirac or Laplacian spectrum")
    cs = sub.add_parser("cs-action", parents=[common], help="Chern-Simons action of a connection file")
    cs.add_argument("connection", help="connection JSON file, '-' for stdin")
    sub.add_parser("partition", parents=[common], help="partition products and identities")
    return parser


def _config(ns) -> RunConfig:
    return RunConfig(ns.theta, ns.dirac, ns.cutoff, ns.level, ns.xi, ns.psi, ns.tolerance, ns.format, ns.seed)


# ---------------------------------------------------------------------------
# commands


def cmd_commutators(cfg: RunConfig) -> dict:
    ctx = cfg.context()
    gens = generators(ctx)
    table = {}
    for name in ("alpha", "beta", "alpha*", "beta*", "u", "v", "u*", "v*"):
        table[name] = commutator(cfg.dirac, gens[name]).to_json()
    return {"command": "commutators", "dirac": cfg.dirac, "theta": ctx.theta, "commutators": table}


def cmd_spectrum(cfg: RunConfig) -> dict:
    if cfg.cutoff < 0:
        raise CliError(EXIT_VALIDATION, "cutoff must be nonnegative")
    rows = spectrum(cfg.dirac, cfg.cutoff)
    return {
        "command": "spectrum",
        "dirac": cfg.dirac,
        "N": cfg.cutoff,
        "rows": [{"eigenvalue": r.eigenvalue, "multiplicity": r.multiplicity, "family": r.family} for r in rows],
        "_csv": spectrum_csv(rows),
    }


def _load_json(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise CliError(EXIT_VALIDATION, f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_JSON, f"malformed JSON: {exc}") from None


def cmd_cs_action(cfg: RunConfig, path: str) -> dict:
    data = _load_json(path)
    ctx = None
    if cfg.theta is not None:
        ctx = DeformationContext(cfg.theta, tol=cfg.tolerance)
    try:
        conn = Connection.from_json(data, ctx)
    except ContextMismatch as exc:
        raise CliError(EXIT_CONTEXT, str(exc)) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_VALIDATION, f"invalid connection: {exc}") from None
    if not conn.self_adjoint:
        raise CliError(EXIT_VALIDATION, "connection violates a_(-m,-n) = conj(a_mn)")
    try:
        report = action_report(cfg.dirac, conn, cfg.psi)
    except SelfAdjointnessError as exc:
        raise CliError(EXIT_VALIDATION, str(exc)) from None
    report["command"] = "cs-action"
    report["theta"] = conn.ctx.theta
    return report


def cmd_partition(cfg: RunConfig) -> dict:
    theta = GOLDEN_CONJ if cfg.theta is None else cfg.theta
    if cfg.cutoff < 1:
        raise CliError(EXIT_VALIDATION, "cutoff must be >= 1")
    if cfg.level < 1:
        raise CliError(EXIT_VALIDATION, "level must be >= 1")
    try:
        report = partition_report(cfg.level, theta, cfg.cutoff, cfg.xi)
        chain = identity_chain(theta, cfg.cutoff)
        mw = partition_modewise(cfg.level, theta, cfg.cutoff, cfg.xi)
    except ResonanceError as exc:
        raise CliError(EXIT_NUMERIC, str(exc)) from None
    report["command"] = "partition"
    report["identity_chain"] = [
        {
            "n": r["n"],
            "sine_form": [r["sine_form"].real, r["sine_form"].imag],
            "gap_exp_sine": r["gap_exp_sine"],
            "gap_sine_gamma": r["gap_sine_gamma"],
        }
        for r in chain
    ]
    report["branch_signs"] = {str(q): s for q, s in sorted(mw.branch_signs.items())}
    return report


# ---------------------------------------------------------------------------
# rendering


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        clean = {k: v for k, v in report.items() if not k.startswith("_")}
        return json.dumps(clean, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        if "_csv" in report:
            return report["_csv"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, val in _flatten(report):
            w.writerow([key, val])
        return buf.getvalue()
    lines = ["| key | value |", "| --- | --- |"]
    for key, val in _flatten(report):
        lines.append(f"| {key} | {val} |")
    return "\n".join(lines) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            if str(k).startswith("_"):
                continue
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, item in enumerate(obj):
            yield from _flatten(item, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, list) else obj


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = _config(ns)
    try:
        if ns.command == "commutators":
            report = cmd_commutators(cfg)
        elif ns.command == "spectrum":
            report = cmd_spectrum(cfg)
        elif ns.command == "cs-action":
            report = cmd_cs_action(cfg, ns.connection)
        else:
            report = cmd_partition(cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = _render(report, cfg.format)
    if ns.out == "-":
        sys.stdout.write(text)
    else:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
