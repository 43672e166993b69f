"""Command line front end: problem file in, JSON or CSV report out.

    crrigidity curvature --input sphere.json --grid 0,0,0.7,21
    crrigidity verdict --input eps.json --n 2 --N 2
    crrigidity lemma --input family.json

Exit status: 0 on any computed verdict, 2 on schema errors, 3 on numeric
domain errors, 4 when a proved identity fails (a bug signal).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Any, Sequence

import numpy as np

from . import __version__, kaehler, lemma, webster
from .errors import CRRigidityError, SchemaError
from .problem import ProblemFile, echo, parse_problem

SUBCOMMAND_KIND = {
    "curvature": "revolution",
    "verdict": "revolution",
    "chern-moser": "revolution",
    "lemma": "lemma",
    "gauss": "embedding",
    "verify-map": "sphere-map",
}
CSV_COLUMNS = ["re(w)", "im(w)", "q", "h", "k", "Q", "A", "B", "K", "skip_reason"]
CM_BRIDGE_K_TOL = 1e-8
CM_BRIDGE_S_TOL = 1e-6


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _f(x) -> float | None:
    return None if x is None else float(np.real(x))


def _point_row(rec: webster.PointRecord) -> dict[str, Any]:
    d = rec.data
    row = {
        "w": _c(rec.w),
        "skip_reason": rec.skip_reason.value if rec.skip_reason else None,
        "K": _f(rec.K),
    }
    if d is not None:
        row.update(
            q=d.q, h=d.h, k=d.k, Q=_f(d.Q), A=_f(d.A), B=d.B, B_check=d.B_check, K_closed=d.K_closed,
        )
    return row


def _parse_grid(text: str) -> webster.Grid:
    try:
        cx, cy, r, steps = text.split(",")
        return webster.Grid(complex(float(cx), float(cy)), float(r), int(steps))
    except ValueError as exc:
        raise SchemaError("--grid", f"expected cx,cy,r,steps ({exc})") from None


def _grid_for(problem: ProblemFile, grid: webster.Grid | None) -> webster.Grid:
    if grid is not None:
        return grid
    if problem.grid is None:
        raise SchemaError("grid", "no grid in the problem file and no --grid flag")
    return problem.grid.to_grid()


def _scan_report(problem, grid, threads) -> tuple[webster.DomainScanReport, dict]:
    report = webster.scan_domain(problem.defining_function(), grid, threads=threads)
    aggregates = {
        "K_min": report.K_min if report.curvatures else None,
        "K_max": report.K_max if report.curvatures else None,
        "points": len(report.points),
        "computed": report.computed,
        "skipped": report.skip_counts(),
    }
    return report, aggregates


def run(
    problem: ProblemFile,
    subcommand: str,
    tol: float | None = None,
    grid: webster.Grid | None = None,
    n: int | None = None,
    N: int | None = None,
    threads: int = 1,
) -> dict[str, Any]:
    """Dispatch one subcommand; returns the report minus the wall-clock field."""
    expected = SUBCOMMAND_KIND.get(subcommand)
    if expected is None:
        raise SchemaError("subcommand", f"unknown subcommand {subcommand!r}")
    if problem.kind != expected:
        raise SchemaError("kind", f"subcommand {subcommand!r} needs a {expected!r} problem, got {problem.kind!r}")
    tol = tol if tol is not None else problem.tol
    out: dict[str, Any] = {"subcommand": subcommand, "verdict": None, "aggregates": {}, "points": []}

    if subcommand in ("curvature", "verdict"):
        g = _grid_for(problem, grid)
        report, aggregates = _scan_report(problem, g, threads)
        out["grid"] = {"center": _c(g.center), "radius": g.radius, "steps": g.steps}
        out["aggregates"] = aggregates
        out["points"] = [_point_row(r) for r in report.points]
        if subcommand == "verdict":
            n_ = n if n is not None else problem.n
            N_ = N if N is not None else (problem.N if problem.N is not None else n_)
            v = webster.embeddability_verdict(report, n_, N_, tol if tol is not None else webster.VERDICT_TOL)
            out["verdict"] = {"verdict": v.verdict.value, "reason": v.reason, "n": n_, "N": N_}

    elif subcommand == "chern-moser":
        g = _grid_for(problem, grid)
        report, aggregates = _scan_report(problem, g, threads)
        h = problem.h()
        rows, s_norms, mismatches = [], [], 0
        for rec in report.points:
            row = _point_row(rec)
            row["S_norm"] = None
            if rec.data is not None:
                S, metric = webster.chern_moser_tensor(rec.data, h)
                s = S.frame_norm(metric)
                row["S_norm"] = s
                s_norms.append(s)
                if (abs(rec.data.K + 2) <= CM_BRIDGE_K_TOL) != (s <= CM_BRIDGE_S_TOL):
                    mismatches += 1
            rows.append(row)
        aggregates["S_norm_max"] = max(s_norms) if s_norms else None
        aggregates["bridge_mismatches"] = mismatches
        out["grid"] = {"center": _c(g.center), "radius": g.radius, "steps": g.steps}
        out["aggregates"] = aggregates
        out["points"] = rows

    elif subcommand == "lemma":
        gs, fs = problem.families_as_polys()
        res = lemma.lemma_verdict(gs, fs, exact=problem.exact, tol=tol if tol is not None else 1e-10)
        out["verdict"] = {
            "verdict": res.verdict.value,
            "n": res.n,
            "k": res.k,
            "lemma_applies": res.lemma_applies,
            "quotient": res.quotient.to_terms() if res.quotient is not None else None,
        }

    elif subcommand == "gauss":
        f = problem.embedding(problem.n)
        chart = kaehler.SpaceFormChart(f.N, problem.kappa)
        source_kappa = problem.source_kappa if problem.source_kappa is not None else problem.kappa
        source = kaehler.SpaceFormChart(problem.n, source_kappa)
        tol_ = tol if tol is not None else 1e-6
        rows = []
        for z in problem.sample_points():
            sff = kaehler.second_fundamental_form(f, chart, z)
            res = kaehler.gauss_residual(f, chart, z)
            rows.append(
                {
                    "z": [_c(x) for x in z],
                    "gauss_residual": res.max_norm(),
                    "second_fundamental_form_norm": sff.norm(),
                    "second_fundamental_form": [[[_c(x) for x in row] for row in comp] for comp in sff.components],
                }
            )
        out["points"] = rows
        out["aggregates"] = {
            "gauss_residual_max": max(r["gauss_residual"] for r in rows),
            "second_fundamental_form_max": max(r["second_fundamental_form_norm"] for r in rows),
        }
        v = kaehler.theorem12_verdict(f, chart, source, problem.sample_points(), tol_)
        out["verdict"] = {"verdict": v.verdict.value, "reason": v.reason, **v.details}

    elif subcommand == "verify-map":
        q = problem.defining_function()
        h = problem.h()
        F = problem.embedding(problem.n + 1)
        samples = problem.sample_points()
        ws = [s[0] for s in samples]
        dirs = [s[1:] if len(s) > 1 else np.ones(problem.n) for s in samples]
        pts = kaehler.sample_hypersurface(q, h, ws, dirs)
        worst = kaehler.verify_map_into_sphere(q, h, F, pts)
        tol_ = tol if tol is not None else 1e-10
        out["points"] = [
            {"point": [_c(x) for x in p], "residual": abs(float(np.vdot(F(p), F(p)).real) - 1.0)} for p in pts
        ]
        out["aggregates"] = {"max_residual": worst}
        out["verdict"] = {"verdict": "MapsIntoSphere" if worst <= tol_ else "LeavesSphere", "tol": tol_}

    out["input_echo"] = echo(problem)
    out["version"] = __version__
    return out


def exit_status(report: dict[str, Any]) -> int:
    verdict = (report.get("verdict") or {}).get("verdict")
    if verdict in ("Inconsistent", "TheoremViolationSuspected"):
        return 4
    return 0


def render_json(report: dict[str, Any]) -> str:
    # float repr is the shortest string that round-trips bit for bit
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def render_csv(report: dict[str, Any]) -> str:
    if report["subcommand"] not in ("curvature", "verdict", "chern-moser"):
        raise SchemaError("--format", "csv output is only available for grid scans")
    columns = CSV_COLUMNS + (["S_norm"] if report["subcommand"] == "chern-moser" else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in report["points"]:
        values = [row["w"][0], row["w"][1]] + [row.get(c) for c in columns[2:]]
        writer.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in values])
    return buf.getvalue()


def summary(report: dict[str, Any]) -> str:
    """One human-readable line for the terminal."""
    parts = [report["subcommand"]]
    verdict = report.get("verdict")
    if verdict:
        parts.append(f"verdict={verdict['verdict']}")
    for key, value in report["aggregates"].items():
        if isinstance(value, float):
            parts.append(f"{key}={value:.6g}")
        elif isinstance(value, int):
            parts.append(f"{key}={value}")
    return " ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--input", "-i", required=True, help="problem file (JSON), '-' for stdin")
    shared.add_argument("--output", "-o", default="-", help="report destination, '-' for stdout")
    shared.add_argument("--tol", type=float, default=None)
    shared.add_argument("--grid", type=_parse_grid, default=None, metavar="cx,cy,r,steps")
    shared.add_argument("--format", choices=("json", "csv"), default="json")
    shared.add_argument("--threads", type=int, default=1)
    shared.add_argument("--summary", action="store_true", help="print a one-line summary to stderr")

    parser = argparse.ArgumentParser(prog="crrigidity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMAND_KIND:
        p = sub.add_parser(name, parents=[shared])
        if name == "verdict":
            p.add_argument("--n", type=int, default=None)
            p.add_argument("--N", type=int, default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SchemaError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_status
    try:
        if args.input == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(args.input, "rb") as fh:
                data = fh.read()
        problem = parse_problem(data)
        start = time.perf_counter()
        report = run(
            problem,
            args.subcommand,
            tol=args.tol,
            grid=args.grid,
            n=getattr(args, "n", None),
            N=getattr(args, "N", None),
            threads=args.threads,
        )
        report["wall_clock_seconds"] = time.perf_counter() - start
        text = render_csv(report) if args.format == "csv" else render_json(report)
    except CRRigidityError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 2
    if args.summary:
        print(summary(report), file=sys.stderr)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return exit_status(report)


if __name__ == "__main__":
    sys.exit(main())
