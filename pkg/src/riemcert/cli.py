"""Command-line front end: certify, verify, moments, demo, render.

Exit codes:
  0  success (for ``verify``/``render``: the certificate checks out)
  1  usage error or malformed certificate JSON
  2  solver could not span the target with the given dilations
  3  internal invariant violation (a guaranteed exact identity failed)
  4  a well-formed certificate failed verification, or a check came out false

The environment variable ``RC_SEED`` is reserved for future randomized
testing hooks and is currently ignored.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence, Union

from .certificates import (
    Case,
    CertificateFormatError,
    InfeasibleError,
    InvariantViolationError,
    admissible_k,
    certificate_identity,
    certify,
    dumps_certificate,
    generator_poly,
    parse_certificate,
    verify,
)
from .differences import mz_polynomial
from .numeric import TestFunction, demo_ggr

DEFAULT_N_CAP = 16

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_INTERNAL = 3
EXIT_FALSE = 4


class _Parser(argparse.ArgumentParser):
    """argparse, but every usage error exits 1 (argparse's default is 2)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riemcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    certify_p = sub.add_parser(
        "certify",
        help="produce a verified certificate decomposing R_n over dilated "
        "Riemann differences",
    )
    certify_p.add_argument("--n", type=int, required=True, help="difference order")
    certify_p.add_argument(
        "--case", choices=["ggr", "variant"], default="ggr", help="admissible k range"
    )
    certify_p.add_argument(
        "--strategy",
        choices=["inductive", "solver"],
        default="inductive",
        help="constructive induction or exact linear solving",
    )
    certify_p.add_argument(
        "--s-max",
        type=int,
        default=None,
        help="solver only: use every dilation 1..S_MAX instead of the dyadic default",
    )
    certify_p.add_argument(
        "--format", choices=["json", "text"], default="json", help="output format"
    )
    certify_p.add_argument("--out", default=None, help="write output to this file")
    certify_p.add_argument(
        "--allow-large",
        action="store_true",
        help=f"lift the interactive cap of n <= {DEFAULT_N_CAP}",
    )

    verify_p = sub.add_parser(
        "verify", help="check a certificate JSON file exactly (read stdin with '-')"
    )
    verify_p.add_argument(
        "certificate", nargs="?", default="-", help="path to certificate JSON, '-' for stdin"
    )

    moments_p = sub.add_parser(
        "moments", help="moment table for the Riemann differences and R_n"
    )
    moments_p.add_argument("--n", type=int, required=True, help="difference order")
    moments_p.add_argument(
        "--case", choices=["ggr", "variant"], default="ggr", help="admissible k range"
    )
    moments_p.add_argument(
        "--format", choices=["json", "text"], default="text", help="output format"
    )
    moments_p.add_argument("--out", default=None, help="write output to this file")

    demo_p = sub.add_parser(
        "demo", help="difference-quotient convergence tables on a test function"
    )
    demo_p.add_argument("--n", type=int, required=True, help="difference order (>= 2)")
    demo_p.add_argument(
        "--fn",
        default="exp",
        help="test function: poly:c0,c1,... | exp | sin | abs_pow:alpha | osc:m,p",
    )
    demo_p.add_argument("--c", default="0", help="center point (rational or float)")
    demo_p.add_argument("--h0", default="1/10", help="initial step (rational or float)")
    demo_p.add_argument("--ratio", default="1/2", help="step shrink factor in (0,1)")
    demo_p.add_argument("--steps", type=int, default=8, help="number of rows per table")
    demo_p.add_argument(
        "--case", choices=["ggr", "variant"], default="ggr", help="admissible k range"
    )
    demo_p.add_argument(
        "--format", choices=["json", "text"], default="text", help="output format"
    )
    demo_p.add_argument("--out", default=None, help="write output to this file")

    render_p = sub.add_parser(
        "render", help="human-readable view of a certificate (read stdin with '-')"
    )
    render_p.add_argument(
        "certificate", nargs="?", default="-", help="path to certificate JSON, '-' for stdin"
    )
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _fail(message: str, code: int) -> int:
    print(f"riemcert: {message}", file=sys.stderr)
    return code


def _parse_number(text: str) -> Union[Fraction, float]:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return float(text)


def _read_certificate(path: str):
    if path == "-":
        return parse_certificate(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as handle:
        return parse_certificate(handle.read())


def run_certify(args: argparse.Namespace) -> int:
    n, case_name = args.n, args.case
    if n < 1:
        return _fail(f"--n must be >= 1, got {n}", EXIT_USAGE)
    case = Case.parse(case_name)
    if case is Case.VARIANT and n < 2:
        return _fail("the variant case needs --n >= 2", EXIT_USAGE)
    if n > DEFAULT_N_CAP and not args.allow_large:
        return _fail(
            f"--n {n} exceeds the cap of {DEFAULT_N_CAP}; pass --allow-large to proceed",
            EXIT_USAGE,
        )
    if args.s_max is not None:
        if args.strategy != "solver":
            return _fail("--s-max only applies to --strategy solver", EXIT_USAGE)
        if args.s_max < 1:
            return _fail(f"--s-max must be >= 1, got {args.s_max}", EXIT_USAGE)
    s_candidates = None if args.s_max is None else range(1, args.s_max + 1)

    try:
        cert = certify(n, case, args.strategy, s_candidates)
    except InfeasibleError as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except InvariantViolationError as exc:
        return _fail(str(exc), EXIT_INTERNAL)

    result = verify(cert)
    if not result.ok:
        return _fail(f"emitted certificate failed verification: {result.message}", EXIT_INTERNAL)
    if args.format == "json":
        _emit(dumps_certificate(cert), args.out)
    else:
        _emit(_render_certificate_text(cert), args.out)
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    try:
        cert = _read_certificate(args.certificate)
    except CertificateFormatError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except OSError as exc:
        return _fail(f"cannot read {args.certificate!r}: {exc}", EXIT_USAGE)
    result = verify(cert)
    if result.ok:
        print(f"OK: {result.message}")
        return EXIT_OK
    print(f"FAIL: {result.message}")
    if result.difference is not None:
        print(f"difference: {result.difference}")
    return EXIT_FALSE


def _moment_payload(n: int, case: Case) -> tuple[dict, bool]:
    mz_target = math.prod(2 ** n - 2 ** j for j in range(1, n))
    delta_rows = {}
    ok = True
    for k in admissible_k(n, case):
        moments = [generator_poly(n, k, 1).theta_moment(m) for m in range(n + 1)]
        ok = ok and all(m == 0 for m in moments[:-1]) and moments[-1] == math.factorial(n)
        delta_rows[k] = moments
    mz_moments = [mz_polynomial(n).theta_moment(m) for m in range(n + 1)]
    ok = ok and all(m == 0 for m in mz_moments[:-1]) and mz_moments[-1] == mz_target
    payload = {
        "n": n,
        "case": case.value,
        "delta": {str(k): [str(m) for m in row] for k, row in delta_rows.items()},
        "mz": [str(m) for m in mz_moments],
        "expected_delta_top": str(math.factorial(n)),
        "expected_mz_top": str(mz_target),
        "ok": ok,
    }
    return payload, ok


def run_moments(args: argparse.Namespace) -> int:
    n = args.n
    if n < 1:
        return _fail(f"--n must be >= 1, got {n}", EXIT_USAGE)
    case = Case.parse(args.case)
    if case is Case.VARIANT and n < 2:
        return _fail("the variant case needs --n >= 2", EXIT_USAGE)
    payload, ok = _moment_payload(n, case)
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = [f"moments up to order {n} (case {case.value})"]
        for k, row in payload["delta"].items():
            lines.append(f"  Delta_{k}: ({', '.join(row)})")
        lines.append(f"  R_{n}:    ({', '.join(payload['mz'])})")
        lines.append(
            f"  expected: Delta top {payload['expected_delta_top']}, "
            f"R_{n} top {payload['expected_mz_top']}"
        )
        lines.append("  check: " + ("ok" if ok else "MISMATCH"))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FALSE


def run_demo(args: argparse.Namespace) -> int:
    if args.n < 2:
        return _fail(f"demo needs --n >= 2, got {args.n}", EXIT_USAGE)
    if args.steps < 1:
        return _fail(f"--steps must be >= 1, got {args.steps}", EXIT_USAGE)
    try:
        fn = TestFunction.parse(args.fn)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        center = _parse_number(args.c)
        h0 = _parse_number(args.h0)
        ratio = _parse_number(args.ratio)
    except ValueError as exc:
        return _fail(f"bad numeric argument: {exc}", EXIT_USAGE)
    try:
        report = demo_ggr(
            args.n, fn, center, h0, ratio, args.steps, Case.parse(args.case)
        )
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    if args.format == "json":
        _emit(json.dumps(report.to_json_dict(), indent=2) + "\n", args.out)
    else:
        _emit(report.render_text() + "\n", args.out)
    return EXIT_OK


def _render_certificate_text(cert) -> str:
    identity = certificate_identity(cert)
    generator_terms = []
    for k, s, coeff in cert.terms:
        factors = []
        if s * k != 0:
            factors.append(f"t^{-s * k}")
        factors.append(f"(t^{s}-1)^{cert.n}" if s != 1 else f"(t-1)^{cert.n}")
        body = "*".join(factors)
        mag = abs(coeff)
        if mag != 1:
            body = f"{mag}*{body}"
        if not generator_terms:
            generator_terms.append(body if coeff > 0 else f"-{body}")
        else:
            generator_terms.append(f" + {body}" if coeff > 0 else f" - {body}")
    lines = [
        f"certificate: n={cert.n}, case={cert.case.value}, {len(cert.terms)} terms",
        f"r_{cert.n} = " + "".join(generator_terms),
        f"r_{cert.n} = {mz_polynomial(cert.n)}",
        identity.render(),
        f"scheme: {identity.lhs}",
        f"schemes structurally equal: {str(identity.equal).lower()}",
    ]
    return "\n".join(lines) + "\n"


def run_render(args: argparse.Namespace) -> int:
    try:
        cert = _read_certificate(args.certificate)
    except CertificateFormatError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except OSError as exc:
        return _fail(f"cannot read {args.certificate!r}: {exc}", EXIT_USAGE)
    result = verify(cert)
    if not result.ok:
        print(f"FAIL: {result.message}")
        return EXIT_FALSE
    sys.stdout.write(_render_certificate_text(cert))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "certify": run_certify,
        "verify": run_verify,
        "moments": run_moments,
        "demo": run_demo,
        "render": run_render,
    }
    return handlers[args.command](args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
