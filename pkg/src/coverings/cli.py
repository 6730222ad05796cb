"""Command line front end.

Exit codes: 0 covers / certified, 1 does not cover / failed,
2 usage or input errors, 3 resource refusals.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from .certificate import CertificateParams, certify, format_bound, hough_quick_check
from .primes import exp_floor
from .residues import (
    DuplicateModulusError,
    ResidueParseError,
    ResourceLimitError,
    load_system,
    uncovered_classes,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["text", "json", "csv"], default="text")

    p = argparse.ArgumentParser(
        prog="coverings",
        description="Decide coverage of residue systems and check covering certificates.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    for name, help_ in (("check-cover", "decide whether a residue system covers Z"),
                        ("density", "exact density of the uncovered set")):
        s = sub.add_parser(name, parents=[fmt], help=help_)
        s.add_argument("file", nargs="?", help="system file ('-' for stdin)")
        s.add_argument("--system", help="inline system, classes separated by ';'")
        s.add_argument("--strict", action="store_true", help="reject repeated moduli")
        s.add_argument("--show", type=int, default=10, help="uncovered residues to list")
        s.add_argument("--max-nodes", type=int, default=5_000_000)

    c = sub.add_parser("certify", parents=[fmt], help="run the inductive certificate")
    c.add_argument("--q0", type=int, default=19)
    c.add_argument("--k", type=int, default=3)
    c.add_argument("--elambda", type=_fraction, default=Fraction(2))
    c.add_argument("--pigood", type=_fraction, default=Fraction(1, 2))
    c.add_argument("--imax", type=int, default=8)
    c.add_argument("--vcap", type=int, default=None)
    c.add_argument("--delta", type=_fraction, default=None)
    c.add_argument("--first-exp", type=float, default=6)
    c.add_argument("--probe", type=int, default=0, help="extra steps to probe numerically")
    c.add_argument("--method", choices=["inductive", "hough"], default="inductive")

    sub.add_parser("table", parents=[fmt], help="default certification as a table")

    q = sub.add_parser("quick-353", parents=[fmt], help="Hough-constant quick check")
    q.add_argument("--q1", type=int, default=353)
    q.add_argument("--p0exp", type=float, default=11)
    q.add_argument("--delta", type=_fraction, default=Fraction(86, 100))
    return p


def _read_system(args):
    if args.system is not None:
        text = args.system.replace(";", "\n")
    elif args.file in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.file) as fh:
            text = fh.read()
    return load_system(text, strict=args.strict)


def _cover_command(args, out) -> int:
    system = _read_system(args)
    u = uncovered_classes(system, cap=args.show, max_nodes=args.max_nodes)
    covers = u.is_empty
    if args.format == "json":
        doc = {
            "covers": covers,
            "Q": u.modulus,
            "uncovered_count": u.count,
            "density": str(u.density),
            "sample": list(u.sample),
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["covers", "Q", "uncovered_count", "density"])
        w.writerow([str(covers).lower(), u.modulus, u.count, str(u.density)])
    elif args.command == "density":
        out.write(f"{u.density}\n")
    elif covers:
        out.write(f"covers; Q = {u.modulus}\n")
    else:
        eg = ", ".join(str(r) for r in u.sample)
        out.write(
            f"does not cover; Q = {u.modulus}; uncovered {u.count} of {u.modulus} "
            f"residues (density {u.density}); e.g. {eg}\n"
        )
    if args.command == "density":
        return EXIT_OK
    return EXIT_OK if covers else EXIT_NEGATIVE


def _emit_report(report, fmt: str, out) -> int:
    if fmt == "json":
        out.write(report.to_json() + "\n")
    elif fmt == "csv":
        out.write(report.to_csv())
    else:
        out.write(report.to_text())
    return EXIT_OK if report.certified else EXIT_NEGATIVE


def _certify_command(args, out) -> int:
    first = int(args.first_exp) if float(args.first_exp).is_integer() else args.first_exp
    try:
        params = CertificateParams.for_q0(
            args.q0, v=args.vcap, k=args.k, e_lambda=args.elambda, pi_good=args.pigood,
            i_max=args.imax, delta=args.delta, first_exponent=first,
            probe_steps=args.probe, method=args.method,
        )
    except ValueError as exc:
        print(f"coverings certify: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return _emit_report(certify(params), args.format, out)


def _quick_command(args, out) -> int:
    p0 = exp_floor(args.p0exp)
    holds, value = hough_quick_check(args.q1, p0, args.delta)
    if args.format == "json":
        doc = {"q1": args.q1, "P0": p0, "p0exp": args.p0exp, "delta": str(args.delta),
               "product_minus_one_upper": value.value, "holds": holds}
        out.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        out.write("q1,P0,delta,product_minus_one_upper,holds\n")
        out.write(f"{args.q1},{p0},{args.delta},{value.value!r},{str(holds).lower()}\n")
    else:
        rel = "<" if holds else ">="
        out.write(
            f"prod_{{{args.q1} < p <= e^{args.p0exp:g}}} (1 + 1/(p-1)) - 1 <= "
            f"{format_bound(value)} {rel} {float(args.delta):g}: {'certified' if holds else 'failed'}\n"
        )
    return EXIT_OK if holds else EXIT_NEGATIVE


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command in ("check-cover", "density"):
            return _cover_command(args, out)
        if args.command == "certify":
            return _certify_command(args, out)
        if args.command == "table":
            return _emit_report(certify(CertificateParams()), args.format, out)
        return _quick_command(args, out)
    except (ResidueParseError, DuplicateModulusError, OSError, ValueError) as exc:
        print(f"coverings {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"coverings {args.command}: refused: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
