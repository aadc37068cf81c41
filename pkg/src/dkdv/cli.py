"""Batch front end: run computations and verification suites, emit JSON,
CSV or text artifacts.

Identical invocations yield byte-identical output (exact arithmetic,
canonical ordering, sorted keys); the worker count of ``verify --jobs``
never changes the bytes, only the wall time.

Exit codes: 0 on success (for ``verify``: every check passed), 1 when a
verification check fails, 2 on usage or computation errors (a machine
readable ``{"error": ..., "detail": ...}`` object is still written).
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from typing import Any, Dict, List, Optional

from . import gue, oracle, suites, taustructure
from .resolvent import mr_recursion

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json",
                        help="output format (default json)")
    common.add_argument("--out", metavar="PATH", default=None,
                        help="write the artifact to PATH instead of stdout")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker threads for independent verification jobs")

    ap = argparse.ArgumentParser(
        prog="dkdv",
        description="Exact computations for the discrete KdV matrix-resolvent engine.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolvent", parents=[common],
                       help="basic-resolvent coefficients a[j], c[j]")
    p.add_argument("--order", "-J", type=int, default=6)
    p.add_argument("--site", type=int, default=0)

    p = sub.add_parser("omega", parents=[common],
                       help="tau-structure entries Omega[i,j]")
    p.add_argument("--weight", type=int, default=6, help="emit all i+j <= weight")
    p.add_argument("--site", type=int, default=0)

    p = sub.add_parser("correlator", parents=[common],
                       help="connected correlator for one valency multiset")
    p.add_argument("--valencies", required=True,
                   help="comma-separated even valencies, e.g. 2,4")
    p.add_argument("--against", choices=("oracle",), default=None,
                   help="also enumerate gluings and compare")

    p = sub.add_parser("census", parents=[common],
                       help="connected ribbon-gluing census per genus "
                            "(CSV columns: valencies, genus, a_value, gluings)")
    p.add_argument("--valencies", required=True)

    p = sub.add_parser("hodge", parents=[common],
                       help="solve the per-genus Hodge numbers "
                            "(CSV columns: g, indices, value)")
    p.add_argument("--genus-max", type=int, default=2)
    p.add_argument("--probes", type=int, default=8)

    p = sub.add_parser("modified", parents=[common],
                       help="half-step modified correlators "
                            "(CSV columns: indices, poly)")
    p.add_argument("-k", type=int, default=2, help="number of indices (>= 2)")
    p.add_argument("--weight", type=int, default=4, help="emit all index sums <= weight")

    p = sub.add_parser("verify", parents=[common],
                       help="run verification suites "
                            "(CSV columns: identity, order, status, first_discrepancy)")
    p.add_argument("--suite", default="all",
                   help="comma-separated suite names or 'all' "
                        f"(available: {','.join(suites.suite_names())})")
    p.add_argument("--jmax", "-J", type=int, default=None,
                   help="override the order of the operator/resolvent suites")
    return ap


def _parse_valencies(text: str) -> tuple:
    try:
        vs = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise SystemExit(_fail("bad-valencies", f"cannot parse {text!r}"))
    return vs


def _fail(code: str, detail: str) -> int:
    sys.stdout.write(json.dumps({"error": code, "detail": detail},
                                sort_keys=True) + "\n")
    return 2


# ---------------------------------------------------------------------------
# payload builders (JSON-ready structures)
# ---------------------------------------------------------------------------
def _payload_resolvent(args) -> Dict[str, Any]:
    rs = mr_recursion(args.order)
    rows = [{"j": j,
             "a": rs.a[j].shift(args.site).to_text(),
             "c": rs.c[j].shift(args.site).to_text()}
            for j in range(rs.order + 1)]
    return {"kind": "resolvent", "order": rs.order, "site": args.site,
            "coefficients": rows}


def _payload_omega(args) -> Dict[str, Any]:
    table = taustructure.omega_table(args.weight, args.site)
    rows = [{"i": i, "j": j, "site": args.site, "poly": v.to_text()}
            for (i, j), v in sorted(table.items())]
    return {"kind": "omega", "weight": args.weight, "entries": rows}


def _payload_correlator(args) -> Dict[str, Any]:
    vs = _parse_valencies(args.valencies)
    poly = gue.correlator_poly(vs)
    ag = gue.extract_ag(vs, poly)
    out: Dict[str, Any] = {
        "kind": "correlator",
        "valencies": list(vs),
        "poly": poly.to_text(),
        "by_genus": {str(g): str(a) for g, a in sorted(ag.items())},
    }
    if args.against == "oracle":
        ref = oracle.connected_cumulant(vs)
        out["match"] = bool(poly == ref)
        if not out["match"]:
            out["oracle_poly"] = ref.to_text()
    return out


def _payload_census(args) -> Dict[str, Any]:
    vs = _parse_valencies(args.valencies)
    cen = oracle.census(vs)
    return {
        "kind": "census",
        "valencies": list(vs),
        "poly": oracle.connected_cumulant(vs).to_text(),
        "by_genus": {str(g): str(a) for g, a in sorted(cen.a_values().items())},
        "gluings_by_genus": {str(g): n for g, n in sorted(cen.by_genus.items())},
    }


def _payload_hodge(args) -> Dict[str, Any]:
    tab = gue.solve_H_numbers(args.genus_max, args.probes)
    entries = [{"g": g, "indices": list(idx), "value": str(v)}
               for (g, idx), v in sorted(tab.entries.items())]
    return {"kind": "hodge", "genus_max": args.genus_max, "probes": args.probes,
            "entries": entries, "checks": tab.report.to_payload()}


def _payload_modified(args) -> Dict[str, Any]:
    table = gue.modified_correlators(args.k, args.weight)
    rows = [{"indices": list(idx), "poly": v.to_text()}
            for idx, v in sorted(table.items())]
    return {"kind": "modified", "k": args.k, "weight": args.weight,
            "entries": rows}


def _payload_verify(args, jobs: int) -> Dict[str, Any]:
    names = (suites.suite_names() if args.suite == "all"
             else [s.strip() for s in args.suite.split(",") if s.strip()])
    unknown = [n for n in names if n not in suites.SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    if args.jmax is not None:
        overrides = {
            "operators": lambda: suites.suite_operators(args.jmax),
            "resolvent": lambda: suites.suite_resolvent(args.jmax),
            "gue": lambda: suites.suite_gue(args.jmax),
        }
        report_fns = {n: overrides.get(n, suites.SUITES[n]) for n in names}
        if jobs <= 1:
            reports = [report_fns[n]() for n in names]
        else:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(report_fns[n]) for n in names]
                reports = [f.result() for f in futures]
        from .reports import merge_reports
        rep = merge_reports("+".join(names), reports)
    else:
        rep = suites.run_suites(names, jobs=jobs)
    return {"kind": "verify", "suites": names, "passed": rep.passed,
            "checks": rep.to_payload()}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------
def _rows_for_csv(payload: Dict[str, Any]) -> List[Dict[str, Any]]:
    kind = payload["kind"]
    if kind == "resolvent":
        return payload["coefficients"]
    if kind == "omega":
        return payload["entries"]
    if kind == "correlator":
        return [{"valencies": " ".join(map(str, payload["valencies"])),
                 "poly": payload["poly"],
                 **{f"genus_{g}": a for g, a in payload["by_genus"].items()},
                 **({"match": payload["match"]} if "match" in payload else {})}]
    if kind == "census":
        return [{"valencies": " ".join(map(str, payload["valencies"])),
                 "genus": g, "a_value": payload["by_genus"][g],
                 "gluings": payload["gluings_by_genus"][g]}
                for g in sorted(payload["by_genus"])]
    if kind == "hodge":
        return [{"g": e["g"], "indices": " ".join(map(str, e["indices"])),
                 "value": e["value"]} for e in payload["entries"]]
    if kind == "modified":
        return [{"indices": " ".join(map(str, e["indices"])), "poly": e["poly"]}
                for e in payload["entries"]]
    if kind == "verify":
        return payload["checks"]
    raise KeyError(kind)


def render(payload: Dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        import csv

        rows = _rows_for_csv(payload)
        buf = io.StringIO()
        fields: List[str] = []
        for r in rows:
            for k in r:
                if k not in fields:
                    fields.append(k)
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        return buf.getvalue()
    # text
    lines = [f"# {payload['kind']}"]
    for row in _rows_for_csv(payload):
        lines.append("  ".join(f"{k}={v}" for k, v in row.items() if v is not None))
    if "passed" in payload:
        lines.append("PASSED" if payload["passed"] else "FAILED")
    return "\n".join(lines) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    builders = {
        "resolvent": lambda: _payload_resolvent(args),
        "omega": lambda: _payload_omega(args),
        "correlator": lambda: _payload_correlator(args),
        "census": lambda: _payload_census(args),
        "hodge": lambda: _payload_hodge(args),
        "modified": lambda: _payload_modified(args),
        "verify": lambda: _payload_verify(args, args.jobs),
    }
    try:
        payload = builders[args.command]()
    except (ValueError, KeyError, ArithmeticError) as exc:
        return _emit(args, {"error": type(exc).__name__, "detail": str(exc)}, 2)
    except Exception as exc:  # module-specific verification errors
        return _emit(args, {"error": type(exc).__name__, "detail": str(exc)}, 2)
    status = 0
    if payload.get("kind") == "verify" and not payload["passed"]:
        status = 1
    if payload.get("kind") == "correlator" and payload.get("match") is False:
        status = 1
    return _emit(args, payload, status)


def _emit(args, payload: Dict[str, Any], status: int) -> int:
    if "error" in payload:
        text = json.dumps(payload, sort_keys=True) + "\n"
    else:
        text = render(payload, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
