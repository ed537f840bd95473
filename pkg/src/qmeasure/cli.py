"""Command line entry point: ``qmeasure eval|integrate|paths|check``.

Exit codes: 0 success, 1 property or consistency failure, 2 usage,
3 validation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import decoherence as dec
from . import paths as ps
from . import quantization as qz
from .measure import nu
from .properties import run_suite
from .scenario import PathScenario, Scenario, ScenarioError, parse_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3
DEFAULT_TOL = 1e-10


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int = EXIT_INVALID, pointer: str = "", partial: dict | None = None):
        super().__init__(message)
        self.code, self.message, self.exit_code, self.pointer, self.partial = code, message, exit_code, pointer, partial


def _cjson(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _names(text: str | None) -> list[str]:
    if not text:
        return []
    return [n for n in (p.strip() for p in text.split(",")) if n]


def _load(path: str, expect) -> Scenario | PathScenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError("IO_ERROR", f"cannot read {path}: {exc.strerror}", EXIT_USAGE) from None
    scn = parse_scenario(text)
    if not isinstance(scn, expect):
        kind = "path scenario" if expect is PathScenario else "measure-space scenario"
        raise CliError("WRONG_SCENARIO_KIND", f"{path} is not a {kind}")
    return scn


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(scn: Scenario, names: list[str], tol: float = DEFAULT_TOL) -> tuple[dict, int]:
    events = [scn.event(n) for n in names]
    rows = []
    for name, A in zip(names, events):
        mu = dec.q_measure(scn.state, A)
        nv = nu(scn.space, A)
        rows.append({"event": name, "nu": nv, "mu_rho": mu, "mu_minus_nu": mu - nv})
    block = [[_cjson(dec.decoherence_functional(scn.state, A, B)) for B in events] for A in events]
    return {"command": "eval", "rows": rows, "decoherence": block}, EXIT_OK


def cmd_integrate(scn: Scenario, rv: str, event: str | None = None, tol: float = DEFAULT_TOL) -> tuple[dict, int]:
    f = scn.random_variable(rv)
    if event is not None:
        f = scn.event(event).mask * f
    trace = qz.quantum_integral(scn.state, f)
    tail = qz.tail_sum(scn.state, f)
    diff = abs(trace - tail)
    report = {
        "command": "integrate",
        "rv": rv,
        "event": event,
        "trace_value": trace,
        "tail_sum_value": tail,
        "abs_difference": diff,
        "tol": tol,
        "ok": diff <= tol,
    }
    return report, EXIT_OK if diff <= tol else EXIT_FAIL


def cmd_paths(
    scn: PathScenario,
    names: list[str],
    dense: bool = False,
    tol: float = DEFAULT_TOL,
    config: ps.PathConfig = ps.PathConfig(),
) -> tuple[dict, int]:
    events = [scn.event(n) for n in names]
    try:
        ens = ps.build_ensemble(scn.system, scn.psi, scn.horizon, config)
    except ps.CapExceeded as exc:
        raise CliError(exc.code, str(exc)) from None
    rows = [{"event": n, "mu": ps.path_q_measure(ens, A)} for n, A in zip(names, events)]
    block = [[_cjson(ps.path_decoherence(ens, A, B)) for B in events] for A in events]
    report = {
        "command": "paths",
        "sites": scn.system.dim,
        "horizon": scn.horizon,
        "paths": ens.space.size,
        "normalization_residual": ens.normalization_residual(),
        "rows": rows,
        "decoherence": block,
    }
    if not dense:
        return report, EXIT_OK
    if ens.space.size > config.dense_cap:
        raise CliError(
            ps.CapExceeded.code,
            f"{ens.space.size} paths exceed the dense cap of {config.dense_cap}; low-rank values reported",
            partial=report,
        )
    worst = 0.0
    for row, A in zip(rows, events):
        res = max((abs(np.subtract(*ps.bridge_check(ens, A, B))) for B in events), default=0.0)
        row["bridge_residual"] = res
        worst = max(worst, res)
    report["bridge_ok"] = worst <= tol
    return report, EXIT_OK if worst <= tol else EXIT_FAIL


def cmd_check(seed: int, cases: int, dim_max: int, tol: float = DEFAULT_TOL, families=None) -> tuple[dict, int]:
    results = run_suite(seed, cases, dim_max, tol, families)
    fams = [
        {
            "family": r.name,
            "group": r.group,
            "cases": r.cases,
            "passed": r.passed,
            "worst_residual": r.worst,
            "worst_case": r.worst_case,
        }
        for r in results
    ]
    ok = all(r.ok for r in results)
    report = {"command": "check", "seed": seed, "cases": cases, "dim_max": dim_max, "tol": tol, "families": fams, "all_passed": ok}
    return report, EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, float) for v in x):
        re, im = x
        return f"{re:.6g}{im:+.6g}i"
    return str(x)


def _table(rows: list[dict], columns: list[str]) -> list[str]:
    cells = [columns] + [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return ["  ".join(c.rjust(w) if j else c.ljust(w) for j, (c, w) in enumerate(zip(row, widths))) for row in cells]


def render_text(report: dict) -> str:
    cmd = report.get("command")
    lines: list[str] = []
    if cmd == "eval":
        lines += _table(report["rows"], ["event", "nu", "mu_rho", "mu_minus_nu"])
        names = [r["event"] for r in report["rows"]]
        if names:
            lines += ["", "D_rho(A_i, A_j):"]
            lines += _table([{"": n, **{m: v for m, v in zip(names, row)}} for n, row in zip(names, report["decoherence"])], [""] + names)
    elif cmd == "integrate":
        for key in ("rv", "event", "trace_value", "tail_sum_value", "abs_difference", "ok"):
            lines.append(f"{key:15s} {_fmt(report[key])}")
    elif cmd == "paths":
        lines.append(f"sites={report['sites']} horizon={report['horizon']} paths={report['paths']} normalization_residual={report['normalization_residual']:.3e}")
        cols = ["event", "mu"] + (["bridge_residual"] if any("bridge_residual" in r for r in report["rows"]) else [])
        lines += _table(report["rows"], cols)
        names = [r["event"] for r in report["rows"]]
        if names:
            lines += ["", "Delta_n(A_i, A_j):"]
            lines += _table([{"": n, **{m: v for m, v in zip(names, row)}} for n, row in zip(names, report["decoherence"])], [""] + names)
    elif cmd == "check":
        lines.append(f"seed={report['seed']} cases={report['cases']} dim_max={report['dim_max']} tol={report['tol']!r}")
        lines += _table(report["families"], ["family", "group", "passed", "cases", "worst_residual"])
        lines.append("ALL PASSED" if report["all_passed"] else "FAILURES")
    else:
        lines.append(json.dumps(report, indent=2))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS if suppress else "text")
    parser.add_argument("--tol", type=float, default=default if suppress else DEFAULT_TOL, help="global tolerance (default 1e-10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmeasure", description="Quantum measures and integrals on finite sample spaces.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="q-measures and decoherence functional of named events")
    _common(p, suppress=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--events", default="")

    p = sub.add_parser("integrate", help="quantum integral by trace and by tail sum")
    _common(p, suppress=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--rv", required=True)
    p.add_argument("--event")

    p = sub.add_parser("paths", help="path q-measures and decoherence for a unitary system")
    _common(p, suppress=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--events", default="")
    p.add_argument("--dense", action="store_true", help="also materialize Delta_n and report bridge residuals")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-paths", type=int, default=ps.DEFAULT_MAX_PATHS)
    p.add_argument("--dense-cap", type=int, default=ps.DEFAULT_DENSE_CAP)

    p = sub.add_parser("check", help="run the seeded property suite")
    _common(p, suppress=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--dim-max", type=int, default=8)
    p.add_argument("--families", default="", help="comma-separated subset of property families")
    return parser


def _emit(report: dict, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        out.write(render_text(report) + "\n")


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    fmt, tol = args.format, args.tol
    try:
        if args.command == "eval":
            report, code = cmd_eval(_load(args.scenario, Scenario), _names(args.events), tol)
        elif args.command == "integrate":
            report, code = cmd_integrate(_load(args.scenario, Scenario), args.rv, args.event, tol)
        elif args.command == "paths":
            if args.workers < 1 or args.max_paths < 1 or args.dense_cap < 0:
                parser.error("--workers and --max-paths must be positive")
            config = ps.PathConfig(args.max_paths, args.dense_cap, args.workers)
            report, code = cmd_paths(_load(args.scenario, PathScenario), _names(args.events), args.dense, tol, config)
        else:
            if args.cases < 1:
                parser.error("--cases must be at least 1")
            if args.dim_max < 1:
                parser.error("--dim-max must be at least 1")
            families = _names(args.families) or None
            from .properties import FAMILY_BY_NAME

            unknown = [f for f in families or [] if f not in FAMILY_BY_NAME]
            if unknown:
                parser.error(f"unknown families: {', '.join(unknown)}")
            report, code = cmd_check(args.seed, args.cases, args.dim_max, tol, families)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    except ScenarioError as exc:
        return _fail(exc.as_dict(), EXIT_INVALID, None, fmt, out, err)
    except CliError as exc:
        return _fail({"code": exc.code, "pointer": exc.pointer, "message": exc.message}, exc.exit_code, exc.partial, fmt, out, err)
    except (dec.ConsistencyError, ArithmeticError) as exc:
        return _fail({"code": "CONSISTENCY", "pointer": "", "message": str(exc)}, EXIT_FAIL, None, fmt, out, err)
    _emit(report, fmt, out)
    return code


def _fail(error: dict, code: int, partial: dict | None, fmt: str, out, err) -> int:
    if fmt == "json":
        doc = {"error": error}
        if partial is not None:
            doc["partial"] = partial
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        if partial is not None:
            out.write(render_text(partial) + "\n")
        pointer = f" at {error['pointer']}" if error.get("pointer") else ""
        err.write(f"error {error['code']}{pointer}: {error['message']}\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
