"""Command-line surface.

Subcommands: reduce, fn-system, info, solve, verify-equiv, verify-pin.
Exit codes: 0 success / verification passed, 1 verification failed,
2 usage or input error, 3 resource limit hit.

Output files are written atomically after the whole command succeeded, so
a failing invocation leaves no partial files behind.  Reports never embed
timings (identical invocations produce byte-identical files); timing lines
go to stderr.

Limits can also be set through environment variables mirroring the flags:
ENKIT_CAP, ENKIT_PAIR_CAP, ENKIT_BOX, ENKIT_POINT_LIMIT, ENKIT_TIME_BUDGET,
ENKIT_JOBS.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import eqio, oracle, pipeline, reductions, system
from .errors import (BoxTooLarge, EnkitError, FamilyTooLarge, ParseError,
                     SearchLimit)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


def _env_float(name: str, default: float) -> float:
    value = os.environ.get(name)
    return float(value) if value else default


def _parse_box_spec(spec: str, dim: int) -> oracle.Box:
    """'-3..3' (every variable) or '-3..3,0..5,...' (one range per variable)."""
    parts = spec.split(",")
    if len(parts) == 1:
        parts = parts * dim
    if len(parts) != dim:
        raise ParseError(f"box spec has {len(parts)} ranges, need {dim}")
    bounds = []
    for part in parts:
        lo_text, sep, hi_text = part.partition("..")
        if not sep:
            raise ParseError(f"bad range {part!r} (expected lo..hi)")
        try:
            bounds.append((int(lo_text), int(hi_text)))
        except ValueError as exc:
            raise ParseError(f"bad range {part!r}") from exc
    return oracle.Box(tuple(bounds))


class _Outputs:
    """Collects rendered files and writes them only when everything worked."""

    def __init__(self):
        self.pending: list[tuple[str, str]] = []

    def add(self, path: str, text: str):
        self.pending.append((path, text))

    def commit(self):
        for path, text in self.pending:
            tmp = path + ".tmp"
            with open(tmp, "w", encoding="ascii") as handle:
                handle.write(text)
            os.replace(tmp, path)


def _load_rep(path: str) -> eqio.FnRepresentation:
    with open(path, encoding="ascii") as handle:
        return eqio.parse_rep(handle.read())


def _load_system(path: str) -> system.EnSystem:
    with open(path, encoding="ascii") as handle:
        return system.deserialize(handle.read())


def _load_cert(path: str) -> reductions.ReductionCertificate:
    with open(path, encoding="ascii") as handle:
        return reductions.parse_certificate(handle.read())


def _limits(args) -> oracle.OracleLimits:
    return oracle.OracleLimits(points=args.point_limit,
                               seconds=args.time_budget)


def _note(message: str):
    print(message, file=sys.stderr)


# --------------------------------------------------------------------------
# subcommands

def _cmd_reduce(args) -> int:
    source = eqio.parse_equation(args.equation)
    d = source.normalized
    mode = ("full_" if args.mode == "full" else "compact_") + \
        ("Z" if args.ring == "z" else "N")
    if args.mode == "halved":
        if args.ring != "z":
            raise ParseError("--mode halved is only defined over the integers")
        mode = "halved_Z"
    started = time.monotonic()
    built, cert = reductions.build_reduction(
        d, mode, cap=args.cap, pair_cap=args.pair_cap)
    _note(f"reduced to {built.n} variables, {len(built.equations)} equations "
          f"in {time.monotonic() - started:.2f}s")
    out = _Outputs()
    out.add(args.out + ".ens", system.serialize(built))
    out.add(args.out + ".cert", reductions.serialize_certificate(cert))
    out.commit()
    return EXIT_OK


def _cmd_fn_system(args) -> int:
    rep = _load_rep(args.rep)
    mode = "Z" if args.ring == "z" else "N"
    family = "full" if args.mode == "full" else "compact"
    psi = pipeline.build_psi(rep, mode, family=family, cap=args.cap,
                             pair_cap=args.pair_cap)
    minimum = pipeline.threshold(psi.s)
    if args.n < minimum:
        _note(f"error: n below threshold {minimum}")
        return EXIT_USAGE
    assembled = pipeline.assemble(psi, args.n)
    out = _Outputs()
    out.add(args.out + ".ens", system.serialize(assembled.system))
    out.add(args.out + ".cert",
            reductions.serialize_certificate(assembled.certificate))
    out.add(args.out + ".layout", pipeline.serialize_layout(assembled))
    out.commit()
    return EXIT_OK


def _cmd_info(args) -> int:
    if not args.rep and not args.equation:
        raise ParseError("info needs --rep or --equation")
    if args.equation:
        d = eqio.parse_equation(args.equation).normalized
        if d.is_zero():
            raise ParseError("equation normalizes to 0 = 0")
        print(f"p = {d.arity}")
        bounds = d.degree_bounds()
        print(f"degree bounds = {list(bounds)}")
        m2 = d.scaled(2).max_abs_coeff()
        print(f"card full_Z = {reductions.card_symmetric(m2, bounds)}")
        print(f"card halved_Z = "
              f"{reductions.card_symmetric(d.max_abs_coeff(), bounds)}")
        b = reductions.b_polynomial(d)
        a = d + b
        delta = max(a.max_abs_coeff(), b.max_abs_coeff())
        print(f"card full_N = {reductions.card_nonneg(delta, bounds)} "
              f"(delta = {delta})")
        compact_z, _ = reductions.build_compact_z(d)
        compact_n, _ = reductions.build_compact_n(d)
        print(f"n compact_Z = {compact_z.n}")
        print(f"n compact_N = {compact_n.n}")
    if args.rep:
        rep = _load_rep(args.rep)
        mode = "Z" if args.ring == "z" else "N"
        family = "full" if args.mode == "full" else "compact"
        psi = pipeline.build_psi(rep, mode, family=family, cap=args.cap,
                                 pair_cap=args.pair_cap)
        print(f"s = {psi.s}")
        bound = pipeline.threshold(psi.s)
        if mode == "Z":
            print(f"m(f) = {bound}")
        else:
            print(f"w(f) = {bound}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    target = _load_system(args.system)
    domain = "Z" if args.ring == "z" else "N"
    outcome = oracle.solve_bounded(target, domain, args.radius,
                                   limits=_limits(args))
    if not outcome.exhausted:
        _note("search truncated by node or time budget")
        return EXIT_LIMIT
    for solution in outcome.solutions:
        values = " ".join(str(solution[i]) for i in range(1, target.n + 1))
        print(f"SOLUTION {values}")
    print(f"count {len(outcome.solutions)}")
    return EXIT_OK


def _report_out(args, payload: dict):
    if args.report:
        out = _Outputs()
        out.add(args.report, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        out.commit()


def _cmd_verify_equiv(args) -> int:
    d = eqio.parse_equation(args.equation).normalized
    target = _load_system(args.system)
    cert = _load_cert(args.cert)
    domain = "Z" if args.ring == "z" else "N"
    box = _parse_box_spec(args.box, d.arity)
    started = time.monotonic()
    report = oracle.check_equivalence(d, target, cert, box, domain,
                                      limits=_limits(args), jobs=args.jobs)
    _note(f"checked {report.base_points} base points "
          f"in {time.monotonic() - started:.2f}s")
    payload = {
        "base_points": report.base_points,
        "base_roots": len(report.base_roots),
        "system_solutions": report.system_solutions,
        "lifted_ok": report.lifted_ok,
        "unique_extension": report.unique_extension,
        "spurious": [list(point) for point in report.spurious],
        "refuted_by_propagation": report.refuted_by_propagation,
        "refuted_by_search": report.refuted_by_search,
        "inconclusive": [list(point) for point in report.inconclusive],
        "counts_equal": report.counts_equal,
        "failures": report.failures,
        "passed": report.passed,
    }
    _report_out(args, payload)
    print(f"roots {len(report.base_roots)} solutions "
          f"{report.system_solutions} spurious {len(report.spurious)}")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_verify_pin(args) -> int:
    target = _load_system(args.system)
    cert = _load_cert(args.cert) if args.cert else None
    domain = "Z" if args.ring == "z" else "N"
    if args.layout:
        with open(args.layout, encoding="ascii") as handle:
            n, s, mode, labels = pipeline.parse_layout(handle.read())
        if n != target.n:
            raise ParseError("layout and system disagree on n")
        psi = pipeline.PsiSystem(
            system=system.EnSystem(s, [eq for eq in target.equations
                                       if max(eq) <= s]),
            s=s, mode=mode, certificate=cert)
        assembled = pipeline.assemble(psi, n)
        if set(assembled.system.equations) != set(target.equations):
            raise ParseError("system does not match the layout's scaffold")
    else:
        if cert is not None:
            raise ParseError("--cert needs --layout to locate the scaffold")
        assembled = _BareSystem(target)
    witness = None
    if args.witness:
        witness = tuple(int(v) for v in args.witness.split(","))
    report = oracle.verify_pinning(
        assembled, args.expected, box_radius=args.radius, domain=domain,
        witness_base=witness, limits=_limits(args))
    payload = {
        "n": report.n,
        "expected": report.expected,
        "x2_forced": report.x2_forced,
        "propagation_complete": report.propagation_complete,
        "solutions_found": report.solutions_found,
        "offending": len(report.offending),
        "search_exhausted": report.search_exhausted,
        "witness_checked": report.witness_checked,
        "witness_ok": report.witness_ok,
        "passed": report.passed,
    }
    _report_out(args, payload)
    print(f"solutions {report.solutions_found} offending "
          f"{len(report.offending)}")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


class _BareSystem:
    """Adapter so verify_pinning can run on a raw .ens file."""

    def __init__(self, target: system.EnSystem):
        self.system = target
        self.n = target.n
        self.mode = "Z"
        self.certificate = None

    def witness_assignment(self, base):
        raise ParseError("witness checking needs --cert and --layout")


# --------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enkit",
        description="Compile Diophantine equations into x_i=1 / x_i+x_j=x_k "
                    "/ x_i*x_j=x_k systems and verify the reductions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, box_default="-8..8"):
        p.add_argument("--cap", type=int,
                       default=_env_int("ENKIT_CAP", reductions.DEFAULT_FAMILY_CAP),
                       help="family size limit for full modes")
        p.add_argument("--pair-cap", type=int,
                       default=_env_int("ENKIT_PAIR_CAP", reductions.DEFAULT_PAIR_CAP),
                       help="member limit for the quadratic pair enumeration")
        p.add_argument("--point-limit", type=int,
                       default=_env_int("ENKIT_POINT_LIMIT", oracle.DEFAULT_POINT_LIMIT),
                       help="box enumeration budget")
        p.add_argument("--time-budget", type=float,
                       default=_env_float("ENKIT_TIME_BUDGET", 60.0),
                       help="soft seconds budget per check")
        p.add_argument("--box", default=os.environ.get("ENKIT_BOX", box_default),
                       help="box spec lo..hi[,lo..hi...]")
        p.add_argument("--jobs", type=int,
                       default=_env_int("ENKIT_JOBS", 1),
                       help="worker processes for verification")

    p = sub.add_parser("reduce", help="equation -> .ens + .cert")
    p.add_argument("equation")
    p.add_argument("--ring", choices=("z", "n"), required=True)
    p.add_argument("--mode", choices=("compact", "full", "halved"),
                   default="compact")
    p.add_argument("--out", default="reduction", help="output path prefix")
    common(p)
    p.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("fn-system", help=".rep + n -> .ens + .cert + .layout")
    p.add_argument("--rep", required=True)
    p.add_argument("--ring", choices=("z", "n"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("compact", "full"), default="compact")
    p.add_argument("--out", default="system", help="output path prefix")
    common(p)
    p.set_defaults(run=_cmd_fn_system)

    p = sub.add_parser("info", help="print sizes, s, and thresholds")
    p.add_argument("--rep")
    p.add_argument("--equation")
    p.add_argument("--ring", choices=("z", "n"), default="n")
    p.add_argument("--mode", choices=("compact", "full"), default="compact")
    common(p)
    p.set_defaults(run=_cmd_info)

    p = sub.add_parser("solve", help="bounded search over an .ens system")
    p.add_argument("--system", required=True)
    p.add_argument("--ring", choices=("z", "n"), default="z")
    p.add_argument("--radius", type=int, default=8,
                   help="branching radius for undetermined variables")
    common(p)
    p.set_defaults(run=_cmd_solve)

    p = sub.add_parser("verify-equiv",
                       help="equation vs .ens/.cert over a box")
    p.add_argument("--equation", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--ring", choices=("z", "n"), required=True)
    p.add_argument("--report", help="write a JSON report here")
    common(p)
    p.set_defaults(run=_cmd_verify_equiv)

    p = sub.add_parser("verify-pin",
                       help="check x1 pinning of an assembled system")
    p.add_argument("--system", required=True)
    p.add_argument("--cert")
    p.add_argument("--layout")
    p.add_argument("--expected", type=int, required=True)
    p.add_argument("--ring", choices=("z", "n"), required=True)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--witness", help="comma-separated base point")
    p.add_argument("--report", help="write a JSON report here")
    common(p)
    p.set_defaults(run=_cmd_verify_pin)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (FamilyTooLarge, BoxTooLarge, SearchLimit) as exc:
        _note(f"error: {exc}")
        return EXIT_LIMIT
    except (EnkitError, OSError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
