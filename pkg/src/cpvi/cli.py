"""Command-line front end: verification suites, integration, dumps.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage
error, 3 internal error.  Parameters are exact rationals in p/q form;
no floating point touches the symbolic suites.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from fractions import Fraction

from .backlund import coxeter_suite, divisor_suite_symbolic, symmetry_suite
from .charts import holomorphy_suite, transformed_hamiltonian
from .errors import CpviError
from .hamiltonians import check_parameter_relation, coupled_polynomial
from .numlab import (
    IntegratorConfig,
    divisor_numeric_suite,
    integrals_suite,
    integrate,
    roundtrip_suite,
)
from .poly import format_poly
from .reduction import dump_pipeline, reduction_suite
from .report import Report

_SUITES = ("symmetry", "coxeter", "holomorphy", "reduction", "divisors",
           "integrals", "all")


def _parse_rational_list(text: str, expected: int, what: str) -> list[Fraction]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != expected:
        raise ValueError(f"{what} needs {expected} comma-separated values, got {len(parts)}")
    try:
        return [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad {what} entry: {exc}") from exc


def _run_suite(name: str, deg_phase: int, deg_t: int) -> Report:
    rep = Report(name)
    if name in ("symmetry", "all"):
        rep.extend(symmetry_suite())
        rep.extend(roundtrip_suite())
    if name in ("coxeter", "all"):
        rep.extend(coxeter_suite())
    if name in ("holomorphy", "all"):
        rep.extend(holomorphy_suite())
    if name in ("reduction", "all"):
        rep.extend(reduction_suite())
    if name in ("divisors", "all"):
        rep.extend(divisor_suite_symbolic())
        rep.extend(divisor_numeric_suite())
    if name in ("integrals", "all"):
        rep.extend(integrals_suite(deg_phase=deg_phase, deg_t=deg_t))
    return rep


def _cmd_verify(args) -> int:
    rep = _run_suite(args.suite, args.deg_phase, args.deg_t)
    if args.json:
        print(rep.to_json())
    else:
        print("\n".join(rep.summary_lines()))
    return 0 if rep.ok else 1


def _cmd_integrate(args) -> int:
    try:
        alpha = _parse_rational_list(args.alpha, 5, "--alpha")
        init = _parse_rational_list(args.init, 4, "--init")
        span = _parse_rational_list(args.span, 2, "--span")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not check_parameter_relation(alpha):
        print("error: --alpha must satisfy a0 + 2*a1 + 3*a2 + 2*a3 + a4 = 1 exactly",
              file=sys.stderr)
        return 2
    t0, t1 = float(span[0]), float(span[1])
    for s in (0.0, 1.0):
        if min(t0, t1) <= s <= max(t0, t1):
            print(f"error: --span must avoid the fixed singularity t = {s:g}",
                  file=sys.stderr)
            return 2
    cfg = IntegratorConfig(rtol=args.rtol, atol=args.rtol * 1e-2)
    traj = integrate(alpha, [float(v) for v in init], (t0, t1), cfg)
    if args.csv:
        traj.write_csv(args.csv)
    if args.plot:
        traj.write_svg(args.plot)
    end = traj.end_state
    print(f"integrated to t = {traj.times[-1]:.12g} in {traj.steps} steps "
          f"({traj.rejections} rejected)")
    print("end state: " + ", ".join(f"{n} = {v:.12g}" for n, v in zip("xyzw", end)))
    return 0


def _cmd_dump(args) -> int:
    if args.what == "hamiltonian":
        print(format_poly(coupled_polynomial()))
        return 0
    if args.what == "chart":
        if args.arg is None:
            print("error: dump chart needs an index 0..4", file=sys.stderr)
            return 2
        try:
            j = int(args.arg)
            if not 0 <= j <= 4:
                raise ValueError
        except ValueError:
            print(f"error: bad chart index {args.arg!r}", file=sys.stderr)
            return 2
        print(format_poly(transformed_hamiltonian(j)))
        return 0
    if args.what == "pipeline":
        if args.arg not in ("k1", "k2"):
            print("error: dump pipeline needs k1 or k2", file=sys.stderr)
            return 2
        print("\n".join(dump_pipeline(args.arg)))
        return 0
    print(f"error: unknown dump target {args.what!r}", file=sys.stderr)
    return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpvi",
        description="Exact verification suites for a coupled Painleve VI system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=_SUITES)
    v.add_argument("--json", action="store_true",
                   help="emit a single JSON report on stdout")
    v.add_argument("--deg-phase", type=int, default=3,
                   help="phase-degree bound for the first-integral search")
    v.add_argument("--deg-t", type=int, default=4,
                   help="time-degree bound for the first-integral search")
    v.set_defaults(func=_cmd_verify)

    ig = sub.add_parser("integrate", help="integrate the coupled system numerically")
    ig.add_argument("--alpha", required=True,
                    help="five exact rationals a0,a1,a2,a3,a4 (p/q form)")
    ig.add_argument("--init", required=True, help="initial x,y,z,w")
    ig.add_argument("--span", required=True, help="time span t0,t1 avoiding 0 and 1")
    ig.add_argument("--rtol", type=float, default=1e-9)
    ig.add_argument("--csv", metavar="PATH", help="write the trajectory as CSV")
    ig.add_argument("--plot", metavar="PATH", help="write an SVG line chart")
    ig.set_defaults(func=_cmd_integrate)

    d = sub.add_parser("dump", help="emit canonical text of key objects")
    d.add_argument("what", choices=["hamiltonian", "chart", "pipeline"])
    d.add_argument("arg", nargs="?")
    d.set_defaults(func=_cmd_dump)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CpviError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
