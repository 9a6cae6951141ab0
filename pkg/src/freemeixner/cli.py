"""Command-line front end: ``freemeixner <verb> [options]``.

Every verb prints one JSON document carrying a ``"schema"`` field (or CSV
where noted).  Exit codes: 0 success, 1 a requested check failed, 2 usage
error, 3 internal error.  Exact inputs are rationals written ``p/q`` or as
integers; floats are rejected.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from . import __version__
from .errors import FreeMeixnerError, InvalidC, NoEigenfunction, NoOperator, NotPositiveDefinite
from .measures import MeasurePair, MomentSequence, hankel_check, moments_to_jacobi, phi_shift, r_transform
from .meixner import (
    FreeMeixnerSpec,
    canonical_operator,
    conjugate_variable,
    density_and_atoms,
    meixner_jacobi,
    meixner_moments,
)
from .numerics import density_grid
from .operators import BochnerOperator, bochner_nullspace, bochner_nullspace_pair, eigensystem, orthogonality_defects
from .polysys import cfree_appell
from .rmt import run_trials
from .series import default_order, format_rational, to_fraction

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    """Bad input detected after argument parsing."""


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(part) for part in text.split(",") if part.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _doc(verb: str, **body) -> dict:
    return {"schema": f"freemeixner.{verb}/1", **body}


def _emit(doc: dict, out: TextIO) -> None:
    out.write(json.dumps(doc, indent=2) + "\n")


def _emit_csv(header: Sequence[str], rows, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _spec(args) -> FreeMeixnerSpec:
    try:
        return FreeMeixnerSpec(args.b, args.c, args.mean, args.var)
    except InvalidC:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _moments(values: list[Fraction]) -> MomentSequence:
    try:
        return MomentSequence(values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _depth(args) -> int:
    return args.depth if args.depth is not None else default_order()


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--b", type=_rational, required=True, help="shape parameter b (p/q)")
    p.add_argument("--c", type=_rational, required=True, help="shape parameter c (p/q)")
    p.add_argument("--mean", type=_rational, default=Fraction(0))
    p.add_argument("--var", type=_rational, default=Fraction(1), help="variance (> 0)")


# -- verbs ------------------------------------------------------------------


def cmd_moments(args, out: TextIO) -> int:
    spec = _spec(args)
    m = meixner_moments(spec, _depth(args))
    if args.csv:
        _emit_csv(["n", "moment"], ([n, format_rational(v)] for n, v in enumerate(m)), out)
        return EXIT_OK
    R = r_transform(m)
    _emit(_doc("moments", spec=spec.to_json(), moments=m.to_json()["moments"],
               free_cumulants=R.to_json(), hankel=hankel_check(m, min(m.depth // 2 + 1, 8)).to_json()), out)
    return EXIT_OK


def cmd_jacobi(args, out: TextIO) -> int:
    m = _moments(args.moments)
    try:
        j = moments_to_jacobi(m)
    except NotPositiveDefinite as exc:
        _emit(_doc("jacobi", verdict="not positive definite", index=exc.index, message=str(exc)), out)
        return EXIT_FAILED
    if args.csv:
        rows = [[n, format_rational(b), format_rational(j.gamma[n]) if n < len(j.gamma) else ""] for n, b in enumerate(j.beta)]
        _emit_csv(["n", "beta", "gamma"], rows, out)
        return EXIT_OK
    _emit(_doc("jacobi", verdict="positive definite", atoms=j.atoms, jacobi=j.to_json()), out)
    return EXIT_OK


def cmd_meixner(args, out: TextIO) -> int:
    spec = _spec(args)
    depth = _depth(args)
    try:
        op = canonical_operator(spec, depth).to_json()
        op_note = None
    except NoOperator as exc:
        op, op_note = None, str(exc)
    d = density_and_atoms(spec)
    _emit(_doc(
        "meixner",
        spec=spec.to_json(),
        jacobi=meixner_jacobi(spec, args.params).to_json(),
        operator=op,
        operator_note=op_note,
        density=d.to_json(),
        atoms=[a.to_json() for a in d.atoms],
        conjugate_variable=conjugate_variable(spec).to_json(),
    ), out)
    return EXIT_OK


def cmd_bochner_check(args, out: TextIO) -> int:
    mu = _moments(args.moments)
    depth = args.depth if args.depth is not None else mu.depth
    if depth > mu.depth:
        raise UsageError(f"--depth {depth} exceeds the {mu.depth} moments supplied")
    if args.nu is not None:
        basis = bochner_nullspace_pair(MeasurePair(mu, _moments(args.nu)), depth)
    else:
        basis = bochner_nullspace(mu, depth)
    candidate = any(v.linear_ok for v in basis)
    verdict = "free Meixner candidate" if candidate else "no Bochner operator"
    _emit(_doc("bochner-check", depth=depth, nullspace=[[format_rational(c) for c in v.coeffs] for v in basis],
               dimension=len(basis), verdict=verdict), out)
    return EXIT_OK if candidate else EXIT_FAILED


def cmd_eigensystem(args, out: TextIO) -> int:
    if args.coeffs is not None:
        if args.moments is None or len(args.coeffs) != 5:
            raise UsageError("--coeffs needs five rationals a,b,c,d,e and --moments")
        mu = _moments(args.moments)
        nu = _moments(args.nu) if args.nu is not None else None
        Q = BochnerOperator.from_coeffs(args.coeffs, mu, nu)
    else:
        if args.b is None or args.c is None:
            raise UsageError("give either --b/--c or --coeffs with --moments")
        Q = canonical_operator(_spec(args), 2 * args.degree + 2)
    try:
        report = eigensystem(Q, args.degree)
    except NoEigenfunction as exc:
        _emit(_doc("eigensystem", operator=Q.to_json(), verdict="no polynomial eigenfunction",
                   degree=exc.degree, message=str(exc)), out)
        return EXIT_FAILED
    _emit(_doc("eigensystem", operator=Q.to_json(), verdict="exact" if report.exact else "residual",
               report=report.to_json()), out)
    return EXIT_OK if report.exact else EXIT_FAILED


def cmd_density(args, out: TextIO) -> int:
    spec = _spec(args)
    d = density_and_atoms(spec)
    x, w = density_grid(d, args.grid)
    _emit_csv(["x", "density"], ([repr(float(a)), repr(float(b))] for a, b in zip(x, w)), out)
    if args.atoms_out:
        with open(args.atoms_out, "w") as fh:
            _emit(_doc("density-atoms", spec=spec.to_json(), atoms=[a.to_json() for a in d.atoms],
                       density=d.to_json()), fh)
    return EXIT_OK


def cmd_appell(args, out: TextIO) -> int:
    nu = _moments(args.nu)
    if args.phi is not None:
        if len(args.phi) != 2 or args.phi[1] <= 0:
            raise UsageError("--phi takes beta,gamma with gamma > 0")
        mu = phi_shift(nu, *args.phi)
    elif args.mu is not None:
        mu = _moments(args.mu)
    else:
        raise UsageError("give --mu or --phi")
    pair = MeasurePair(mu, nu)
    A = cfree_appell(pair, args.degree)
    defects = orthogonality_defects(pair.mu, A, args.degree)
    _emit(_doc("appell", polynomials=A.to_json()["polys"], orthogonal=not defects,
               nonzero_inner_products=[[i, j, format_rational(v)] for i, j, v in defects]), out)
    return EXIT_OK


def cmd_rmt(args, out: TextIO) -> int:
    if args.n < 1 or args.trials < 1:
        raise UsageError("--n and --trials must be positive")
    try:
        report = run_trials(args.model, args.n, args.k1, args.k2, args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.csv:
        _emit_csv(["trial", "ks"], ([i, repr(v)] for i, v in enumerate(report.ks)), out)
        passed = args.threshold is None or report.mean_ks < args.threshold
        return EXIT_OK if passed else EXIT_FAILED
    doc = _doc("rmt", **report.to_json())
    if args.threshold is not None:
        doc["threshold"] = args.threshold
        doc["verdict"] = "pass" if report.mean_ks < args.threshold else "fail"
    _emit(doc, out)
    return EXIT_FAILED if doc.get("verdict") == "fail" else EXIT_OK


def cmd_verify_all(args, out: TextIO) -> int:
    from .verify import run_all

    results = run_all(depth=args.depth, only=args.only)
    for r in results:
        print(r.line(), file=sys.stderr)
    passed = all(r.passed for r in results)
    _emit(_doc("verify-all", passed=passed, results=[r.to_json() for r in results]), out)
    return EXIT_OK if passed else EXIT_FAILED


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freemeixner", description="Exact free Meixner toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("moments", help="moments, free cumulants and Hankel determinants of a free Meixner law")
    _add_spec_args(p)
    p.add_argument("--depth", type=int, help="highest moment (default $FREEMEIXNER_ORDER or 16)")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("jacobi", help="Jacobi parameters from moments")
    p.add_argument("--moments", type=_rational_list, required=True, help="m_0,m_1,... with m_0 = 1")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("meixner", help="Jacobi data, operator, density, atoms and conjugate variable")
    _add_spec_args(p)
    p.add_argument("--depth", type=int, help="moment depth behind the operator")
    p.add_argument("--params", type=int, default=4, help="Jacobi pairs to print")
    p.set_defaults(func=cmd_meixner)

    p = sub.add_parser("bochner-check", help="nullspace of the moment recursion")
    p.add_argument("--moments", type=_rational_list, required=True)
    p.add_argument("--nu", type=_rational_list, help="moments of the inner measure (two-measure form)")
    p.add_argument("--depth", type=int)
    p.set_defaults(func=cmd_bochner_check)

    p = sub.add_parser("eigensystem", help="polynomial eigenfunctions of a Bochner operator")
    p.add_argument("--b", type=_rational)
    p.add_argument("--c", type=_rational)
    p.add_argument("--mean", type=_rational, default=Fraction(0))
    p.add_argument("--var", type=_rational, default=Fraction(1))
    p.add_argument("--coeffs", type=_rational_list, help="a,b,c,d,e")
    p.add_argument("--moments", type=_rational_list)
    p.add_argument("--nu", type=_rational_list)
    p.add_argument("--degree", type=int, default=6)
    p.set_defaults(func=cmd_eigensystem)

    p = sub.add_parser("density", help="CSV of the absolutely continuous density")
    _add_spec_args(p)
    p.add_argument("--grid", type=int, default=201, help="number of support points")
    p.add_argument("--atoms-out", help="write atoms and density data as JSON to this path")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("appell", help="c-free Appell polynomials of a pair")
    p.add_argument("--nu", type=_rational_list, required=True)
    p.add_argument("--mu", type=_rational_list)
    p.add_argument("--phi", type=_rational_list, help="beta,gamma: take mu = Phi_{beta,gamma}[nu]")
    p.add_argument("--degree", type=int, default=4)
    p.set_defaults(func=cmd_appell)

    p = sub.add_parser("rmt", help="KS distance of random-matrix spectra to their limit")
    p.add_argument("--model", choices=["gue", "wishart", "jacobi"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k1", type=int, default=0)
    p.add_argument("--k2", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, help="fail when the mean KS distance reaches this")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_rmt)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    p.add_argument("--depth", type=int, help="nullspace/oracle depth (at least 8)")
    p.add_argument("--only", type=_int_list, help="comma-separated check numbers")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, InvalidC) as exc:
        print(f"freemeixner {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FreeMeixnerError as exc:
        _emit(_doc(args.verb, verdict="error", error=type(exc).__name__, message=str(exc)), out)
        return EXIT_FAILED
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"freemeixner {args.verb}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
