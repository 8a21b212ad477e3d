"""Command-line front end.

Usage:
  isoclin analyze D4
  isoclin aut D4 --n 1 --M gamma2 --N Z1
  isoclin isoclinic D4 Q8 --n 1
  isoclin verify --suite all --max-order 32 --json

Exit codes: 0 when every executed check passes, 1 on a failed check,
2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Sequence

from .aut import automorphism_group, aut_subgroup, inner_automorphism_group, nth_class_preserving
from .catalog import resolve_group
from .errors import GroupError
from .group import FiniteGroup, Subgroup, center, exponent, generate, prime_factors, trivial_subgroup, whole
from .isoclinism import find_n_isoclinism, hekster_invariant_check, psi
from .series import lower_central, lower_central_series, nilpotency_class, upper_central, upper_central_series
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_subgroup(G: FiniteGroup, spec: str) -> Subgroup:
    """``gamma<i>``, ``Z<i>``, ``center``, ``trivial``, ``whole``, or a comma
    separated list of element indices or names (the subgroup they generate)."""
    spec = spec.strip()
    if m := re.fullmatch(r"gamma(\d+)", spec):
        i = int(m.group(1))
        if i < 1:
            raise UsageError("gamma terms start at gamma1")
        return lower_central(G, i)
    if m := re.fullmatch(r"Z(\d+)", spec):
        return upper_central(G, int(m.group(1)))
    fixed = {"center": center, "trivial": trivial_subgroup, "whole": whole}
    if spec in fixed:
        return fixed[spec](G)
    names = {name: i for i, name in enumerate(G.element_names or ())}
    elems = []
    for token in filter(None, (t.strip() for t in spec.strip("[]{}").split(","))):
        if token in names:
            elems.append(names[token])
        elif token.isdigit() and int(token) < G.order:
            elems.append(int(token))
        else:
            raise UsageError(f"cannot read subgroup spec {spec!r}: unknown element {token!r}")
    if not elems:
        raise UsageError(f"cannot read subgroup spec {spec!r}")
    return generate(G, elems)


def _group(spec: str) -> FiniteGroup:
    try:
        G = resolve_group(spec)
    except (KeyError, FileNotFoundError, OSError) as exc:
        raise UsageError(str(exc.args[0]) if exc.args else str(exc)) from exc
    if G.label is None:
        G.label = spec
    return G


def _report(command: str, inputs: dict, results: dict, status: str) -> dict:
    return {"command": command, "inputs": inputs, "results": results, "status": status}


# -- commands -------------------------------------------------------------------------


def cmd_analyze(args) -> dict:
    G = _group(args.group)
    c = nilpotency_class(G)
    lower = lower_central_series(G)
    upper = upper_central_series(G)
    results = {
        "order": G.order,
        "abelian": G.is_abelian,
        "nilpotent": isinstance(c, int),
        "nilpotency_class": c if isinstance(c, int) else None,
        "lower_central_orders": lower.orders(),
        "upper_central_orders": upper.orders(),
        "center_order": center(G).order,
        "exponent": exponent(G),
        "primes": prime_factors(G.order),
    }
    return _report("analyze", {"group": args.group}, results, "pass")


def cmd_aut(args) -> dict:
    G = _group(args.group)
    inputs: dict[str, Any] = {"group": args.group, "n": args.n, "M": args.M, "N": args.N}
    results: dict[str, Any] = {
        "aut_order": len(automorphism_group(G)),
        "inn_order": len(inner_automorphism_group(G)),
    }
    if args.M is not None or args.N is not None:
        M = parse_subgroup(G, args.M or "whole")
        N = parse_subgroup(G, args.N or "trivial")
        results["M_order"] = M.order
        results["N_order"] = N.order
        results["aut_N_M_order"] = len(aut_subgroup(G, M, N))
    if args.n is not None:
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        results["class_preserving_order"] = len(nth_class_preserving(G, args.n))
    return _report("aut", inputs, results, "pass")


def cmd_isoclinic(args) -> dict:
    G, H = _group(args.G), _group(args.H)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    inputs = {"G": args.G, "H": args.H, "n": args.n, "exhaustive": args.exhaustive}
    found = find_n_isoclinism(G, H, args.n, exhaustive=args.exhaustive)
    witnesses = found if isinstance(found, list) else ([found] if found else [])
    if not witnesses:
        reason = getattr(found, "reason", "no valid pair found")
        return _report("isoclinic", inputs, {"isoclinic": False, "reason": reason}, "not-applicable")
    checks = []
    for iso in witnesses:
        hek = hekster_invariant_check(iso)
        rep = psi(iso)
        checks.append((iso, hek, rep))
    iso, hek, rep = checks[0]
    results: dict[str, Any] = {
        "isoclinic": True,
        "witness": iso.as_dict(),
        "hekster": hek.as_dict(),
        "psi": rep.as_dict(),
    }
    if args.exhaustive:
        results["witnesses_found"] = len(witnesses)
        results["all_hekster_pass"] = all(h.passed for _, h, _ in checks)
        results["all_psi_pass"] = all(r.passed for _, _, r in checks)
    ok = all(h.passed and r.passed for _, h, r in checks)
    return _report("isoclinic", inputs, results, "pass" if ok else "fail")


def cmd_verify(args) -> dict:
    if args.max_order < 1:
        raise UsageError("--max-order must be positive")
    suites = run_suite(args.suite, args.max_order)
    results = {s.name: s.as_dict() for s in suites}
    ok = all(s.passed for s in suites)
    inputs = {"suite": args.suite, "max_order": args.max_order}
    return _report("verify", inputs, results, "pass" if ok else "fail")


# -- output -------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in value.items()) + "}"
    return str(value)


def _render_mapping(d: dict, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    for k, v in d.items():
        if isinstance(v, dict) and v and any(isinstance(x, (dict, list)) for x in v.values()):
            lines.append(f"{pad}{k}:")
            _render_mapping(v, indent + 1, lines)
        else:
            lines.append(f"{pad}{k}: {_fmt(v)}")


def _instance_line(inst: dict) -> str:
    tag = "ok  " if inst["passed"] else "FAIL"
    fields = ", ".join(f"{k}={_fmt(v)}" for k, v in inst.items() if k != "passed")
    return f"    {tag} {fields}"


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    lines.append("inputs:")
    _render_mapping(report["inputs"], 1, lines)
    if report["command"] != "verify":
        lines.append("results:")
        _render_mapping(report["results"], 1, lines)
        return "\n".join(lines)
    lines.append("results:")
    for name, suite in report["results"].items():
        verdict = "pass" if suite["passed"] else "FAIL"
        lines.append(
            f"  {name}: {verdict} ({suite['instances_run']} instances, {suite['failures']} failures, "
            f"max_order={suite['max_order']})"
        )
        for note in suite["notes"]:
            lines.append(f"    note: {note}")
        for inst in suite["instances"]:
            lines.append(_instance_line(inst))
    return "\n".join(lines)


def emit(report: dict, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_text(report) + "\n")


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="isoclin", description="Finite group computations and theorem checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="series, class, exponent")
    p.add_argument("group")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("aut", parents=[common], help="automorphism subgroup orders")
    p.add_argument("group")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--M", default=None, help="gamma<i>, Z<i>, center, trivial, whole or an element list")
    p.add_argument("--N", default=None, help="same syntax as --M")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("isoclinic", parents=[common], help="search for an n-isoclinism")
    p.add_argument("G")
    p.add_argument("H")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_isoclinic)

    p = sub.add_parser("verify", parents=[common], help="run verification suites over the catalog")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--max-order", type=int, default=64)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except (UsageError, GroupError) as exc:
        sys.stderr.write(f"isoclin {args.command}: error: {exc}\n")
        return EXIT_USAGE
    emit(report, args.json)
    return EXIT_FAIL if report["status"] == "fail" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
