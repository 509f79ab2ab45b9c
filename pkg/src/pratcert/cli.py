"""Command line surface: certification checks, scans, table reproduction,
and low-level quadratic-field utilities.

Exit codes: 0 for answered queries (a NOT_CERTIFIED verdict is an answer),
2 for invalid input, 1 for internal errors.  Output is deterministic: no
timings, hostnames or worker counts ever reach stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from ._version import __version__
from .classno import h_imaginary, h_plus_real
from .criteria import (
    CERTIFIED_FREE,
    SCHEMA_VERSION,
    FreenessReport,
    PRationalityReport,
    certify_freeness,
    prat_imag,
    prat_real,
)
from .quadratic import fundamental_unit, make_field
from .scan import reproduce_table, scan_q

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

_FORMATS = ("text", "json", "csv")


def _color_enabled() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _verdict_text(verdict: str) -> str:
    label = verdict.upper()
    if not _color_enabled():
        return label
    code = "32" if verdict == CERTIFIED_FREE else "33"
    return f"\x1b[{code}m{label}\x1b[0m"


def _dump_json(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _csv_escape(value: Any) -> str:
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _print_csv(rows: list[list[Any]]) -> None:
    for row in rows:
        print(",".join(_csv_escape(v) for v in row))


def _render_check(report: FreenessReport, fmt: str) -> None:
    if fmt == "json":
        _dump_json(report.to_dict())
        return
    if fmt == "csv":
        rows: list[list[Any]] = [["key", "value"]]
        rows += [["p", report.p], ["q", report.q], ["d", report.d]]
        rows += [["verdict", report.verdict], ["rank", report.rank], ["mode", report.mode]]
        rows += [[f"facts.{k}", v] for k, v in report.facts.items()]
        rows += [["reason", r] for r in report.reasons]
        _print_csv(rows)
        return
    field = f"Q(sqrt({report.p * report.q}), sqrt({-report.d}))"
    print(f"field {field} with p={report.p} q={report.q} d={report.d}")
    if report.verdict == CERTIFIED_FREE:
        print(f"verdict: {_verdict_text(report.verdict)} (rank {report.rank})")
    else:
        print(f"verdict: {_verdict_text(report.verdict)}")
        print("the verdict does not assert non-freeness, only that some")
        print("hypothesis could not be verified")
    if report.facts:
        print("facts:")
        for key, value in report.facts.items():
            print(f"  {key} = {value}")
    if report.reasons:
        print("reasons:")
        for reason in report.reasons:
            print(f"  - {reason}")


def _cmd_check(args: argparse.Namespace) -> int:
    report = certify_freeness(args.p, args.q, args.d, exact=True)
    if report.invalid:
        for violation in report.invalid:
            print(f"error: {violation}", file=sys.stderr)
        return EXIT_USAGE
    _render_check(report, args.format)
    return EXIT_OK


def _cmd_scan(args: argparse.Namespace) -> int:
    qs = scan_q(args.p, args.d, args.q_max, cache=args.cache, jobs=args.jobs)
    if args.format == "json":
        _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "tool_version": __version__,
                "p": args.p,
                "d": args.d,
                "q_max": args.q_max,
                "certified_q": qs,
            }
        )
    elif args.format == "csv":
        _print_csv([["p", "d", "q"]] + [[args.p, args.d, q] for q in qs])
    else:
        print(f"p={args.p} d={args.d} q_max={args.q_max}")
        print(" ".join(str(q) for q in qs))
    return EXIT_OK


def _cmd_table(args: argparse.Namespace) -> int:
    p_list = _parse_p_list(args.p_list)
    rows = reproduce_table(p_list, args.q_max, args.d, jobs=args.jobs)
    if args.format == "json":
        _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "tool_version": __version__,
                "d": args.d,
                "q_max": args.q_max,
                "rows": [
                    {"p": r.p, "certified_q": list(r.certified), "error": r.error}
                    for r in rows
                ],
            }
        )
    elif args.format == "csv":
        data: list[list[Any]] = [["p", "d", "q"]]
        for r in rows:
            if r.error is not None:
                print(f"error: p={r.p}: {r.error}", file=sys.stderr)
                continue
            data += [[r.p, args.d, q] for q in r.certified]
        _print_csv(data)
    else:
        for r in rows:
            if r.error is not None:
                print(f"p={r.p}: error: {r.error}")
            else:
                print(f"p={r.p}: " + " ".join(str(q) for q in r.certified))
    return EXIT_OK


def _parse_p_list(raw: str) -> list[int]:
    try:
        values = [int(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"--p-list must be comma-separated integers, got {raw!r}")
    if not values:
        raise ValueError("--p-list must name at least one prime")
    return values


def _cmd_quad_unit(args: argparse.Namespace) -> int:
    field = make_field(args.m)
    fu = fundamental_unit(field)
    e = fu.elem
    if args.format == "json":
        _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "tool_version": __version__,
                "m": field.m,
                "x": e.x,
                "y": e.y,
                "den": e.den,
                "norm": fu.unit_norm,
            }
        )
    elif args.format == "csv":
        _print_csv([["m", "x", "y", "den", "norm"], [field.m, e.x, e.y, e.den, fu.unit_norm]])
    else:
        print(f"{e}, norm {fu.unit_norm:+d}")
    return EXIT_OK


def _cmd_quad_classno(args: argparse.Namespace) -> int:
    disc = args.disc
    result = h_imaginary(disc) if disc < 0 else h_plus_real(disc)
    if args.format == "json":
        _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "tool_version": __version__,
                "disc": result.disc,
                "h": result.h,
                "h_plus": result.h_plus,
                "method": result.method,
            }
        )
    elif args.format == "csv":
        _print_csv(
            [
                ["disc", "h", "h_plus", "method"],
                [result.disc, result.h, "" if result.h_plus is None else result.h_plus, result.method],
            ]
        )
    elif result.h_plus is None:
        print(f"disc {result.disc}: h = {result.h} ({result.method})")
    else:
        print(f"disc {result.disc}: h+ = {result.h_plus}, h = {result.h} ({result.method})")
    return EXIT_OK


def _render_prat(report: PRationalityReport, fmt: str) -> None:
    if fmt == "json":
        _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "tool_version": __version__,
                "field": report.field_desc,
                "radicands": list(report.radicands),
                "p": report.p,
                "checks": [
                    {"name": c.name, "value": c.value, "passed": c.passed}
                    for c in report.checks
                ],
                "verdict": report.verdict,
            }
        )
        return
    if fmt == "csv":
        rows: list[list[Any]] = [["name", "value", "passed"]]
        rows += [[c.name, c.value, c.passed] for c in report.checks]
        rows.append(["p_rational", "", report.verdict])
        _print_csv(rows)
        return
    print(f"field {report.field_desc}, p = {report.p}")
    for c in report.checks:
        print(f"  {c.name} = {c.value} ({'pass' if c.passed else 'fail'})")
    print(f"p-rational: {'yes' if report.verdict else 'no'}")


def _cmd_quad_prat(args: argparse.Namespace) -> int:
    if args.m < 0:
        report = prat_imag(-args.m, args.p)
    else:
        report = prat_real(args.m, args.p)
    _render_prat(report, args.format)
    return EXIT_OK


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=_FORMATS, default="text", help="output format"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pratcert",
        description=(
            "Freeness certificates for the Galois module of the quartic "
            "fields Q(sqrt(pq), sqrt(-d)), plus quadratic-field utilities."
        ),
    )
    parser.add_argument("--version", action="version", version=f"pratcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="certify one (p, q, d) with exact arithmetic")
    check.add_argument("--p", type=int, required=True, help="prime > 3")
    check.add_argument("--q", type=int, required=True, help="odd prime, q = -1 mod p")
    check.add_argument("--d", type=int, required=True, help="positive squarefree integer")
    _add_format(check)
    check.set_defaults(func=_cmd_check)

    scan = sub.add_parser("scan", help="sweep candidate q for fixed (p, d)")
    scan.add_argument("--p", type=int, required=True, help="prime >= 5")
    scan.add_argument("--d", type=int, required=True, help="positive squarefree integer")
    scan.add_argument("--q-max", type=int, required=True, help="upper bound for q")
    scan.add_argument("--jobs", type=int, default=1, help="parallel workers")
    scan.add_argument("--cache", help="append-only JSON lines record cache")
    _add_format(scan)
    scan.set_defaults(func=_cmd_scan)

    table = sub.add_parser("table", help="one scan row per p")
    table.add_argument("--p-list", required=True, help="comma-separated primes")
    table.add_argument("--d", type=int, required=True, help="positive squarefree integer")
    table.add_argument("--q-max", type=int, required=True, help="upper bound for q")
    table.add_argument("--jobs", type=int, default=1, help="parallel workers")
    _add_format(table)
    table.set_defaults(func=_cmd_table)

    quad = sub.add_parser("quad", help="quadratic-field utilities")
    qsub = quad.add_subparsers(dest="quad_command", required=True)

    unit = qsub.add_parser("unit", help="fundamental unit of Q(sqrt(m))")
    unit.add_argument("--m", type=int, required=True, help="radicand > 1")
    _add_format(unit)
    unit.set_defaults(func=_cmd_quad_unit)

    classno = qsub.add_parser("classno", help="class number for a fundamental discriminant")
    classno.add_argument("--disc", type=int, required=True, help="fundamental discriminant")
    _add_format(classno)
    classno.set_defaults(func=_cmd_quad_classno)

    prat = qsub.add_parser("prat", help="p-rationality of a quadratic field")
    prat.add_argument("--m", type=int, required=True, help="radicand, sign selects the field")
    prat.add_argument("--p", type=int, required=True, help="prime >= 5")
    _add_format(prat)
    prat.set_defaults(func=_cmd_quad_prat)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
