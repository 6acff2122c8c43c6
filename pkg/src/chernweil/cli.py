"""Batch front-end.

Exit codes: 0 all requested checks pass, 1 a mathematical check failed
(first counterexample in the report), 2 usage or parse errors.  Reports
are deterministic for a fixed (inputs, seed, mode): identical invocations
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

import numpy as np

from . import bundles as bn
from . import cw
from . import io as cio
from . import liealg as la
from . import simplicial as sc
from .scalars import Scalar
from .verify import SUITES, run_suite

USAGE_ERROR, MATH_FAILURE = 2, 1


class UsageError(Exception):
    pass


class RunReport:
    """Ordered pass/fail lines plus numeric results; versioned format."""

    def __init__(self, command, seed, mode):
        self.lines = [f"chernweil-report v1", f"command: {command}", f"seed: {seed}", f"mode: {mode}"]
        self.failed = False

    def add(self, text):
        self.lines.append(text)

    def check(self, name, ok, detail=""):
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        if not ok:
            self.failed = True

    def finish(self):
        self.lines.append(f"result: {'fail' if self.failed else 'pass'}")
        return "\n".join(self.lines) + "\n"


def _parse_space(selector):
    if ":" in selector:
        kind, _, arg = selector.partition(":")
        if kind == "standard":
            return sc.standard_simplex(int(arg))
        if kind == "boundary-sphere":
            return sc.boundary_sphere(int(arg))
        if kind == "clutch":
            return sc.two_disk_sphere()
    if selector == "two-disk":
        return sc.two_disk_sphere()
    path = Path(selector)
    if not path.exists():
        raise UsageError(f"unknown space selector or missing file: {selector}")
    return cio.parse_simplicial_set(path.read_text())


def _scalar_str(v, mode):
    if mode == "float":
        return repr(v.to_complex())
    return cio.scalar_to_str(v)


def cmd_betti(args, report):
    X = _parse_space(args.space)
    maxd = X.dim if args.max_dim is None else args.max_dim
    b = sc.betti_numbers(X, maxd)
    report.add("betti: " + " ".join(map(str, b)))
    report.check("betti-computed", True, f"dims 0..{maxd}")
    return report


def _load_bundle(args):
    """Returns (base, bundle, connection, name, expected winding or None)."""
    sel = args.bundle
    if sel.startswith("clutch:"):
        n = int(sel.split(":")[1])
        P, D = bn.clutch_bundle(n)
        if args.connection:
            D = cio.parse_connection(Path(args.connection).read_text(), P)
        return P.base, P, D, f"clutch({n})", n
    if args.space is None:
        raise UsageError("--space is required with a bundle file")
    X = _parse_space(args.space)
    P = cio.parse_bundle(Path(sel).read_text(), X)
    rep = bn.validate_bundle(P, tol=args.tol, seed=args.seed)
    if not rep.ok:
        raise MathError("bundle validation failed: " + rep.failures[0], rep)
    if args.connection:
        D = cio.parse_connection(Path(args.connection).read_text(), P)
    else:
        D = bn.construct_connection(P)
    name = Path(sel).stem
    return X, P, D, name, None


class MathError(Exception):
    def __init__(self, msg, payload=None):
        super().__init__(msg)
        self.payload = payload


def cmd_chern(args, report):
    X, P, D, name, winding = _load_bundle(args)
    crep = bn.validate_connection(P, D, tol=args.tol, seed=args.seed)
    report.check("connection-valid", crep.ok, "exact" if crep.exact else f"sampled, worst {crep.worst:.2e}")
    rho = la.invariant_polynomial_from_selector(P.algebra, args.poly)
    alpha = cw.cw_cochain(rho, D)
    closed = sc.coboundary(X, alpha).is_zero()
    cycles = []
    if X == sc.two_disk_sphere():
        cycles.append(sc.fundamental_cycle_two_disk(X))
    pairings = [sc.pairing(alpha, z) for z in cycles]
    rep = cw.ClassReport(args.poly, name, closed, pairings)
    report.add(rep.machine_line())
    report.check("cochain-closed", closed)
    if winding is not None and pairings:
        oracle = bn.clutch_winding(P)
        ok = pairings[0] == oracle == Scalar.from_rational(winding)
        report.check("winding-oracle-agreement", ok, f"pairing={_scalar_str(pairings[0], args.mode)}")
    return report


def cmd_clutch(args, report):
    P, D = bn.clutch_bundle(args.n)
    report.check("bundle-valid", bn.validate_bundle(P).ok)
    report.check("connection-valid", bn.validate_connection(P, D).ok)
    w = bn.clutch_winding(P)
    rho = la.chern_polynomial(P.algebra, 1)
    alpha = cw.cw_cochain(rho, D)
    v = sc.pairing(alpha, sc.fundamental_cycle_two_disk(P.base))
    report.add(f"winding: {_scalar_str(w, args.mode)}")
    report.add(f"chern pairing: {_scalar_str(v, args.mode)}")
    report.check("integrality", v == w == Scalar.from_rational(args.n))
    if args.out:
        _write_generated(Path(args.out), P, D, report)
    return report


def _write_generated(outdir, P, D, report):
    outdir.mkdir(parents=True, exist_ok=True)
    space_text = cio.simplicial_set_to_str(P.base)
    bundle_text = cio.bundle_to_str(P)
    (outdir / "space.txt").write_text(space_text)
    (outdir / "bundle.txt").write_text(bundle_text)
    X2 = cio.parse_simplicial_set(space_text)
    P2 = cio.parse_bundle(bundle_text, X2)
    round_trip = P2.transitions == P.transitions and cio.bundle_to_str(P2) == bundle_text
    if D is not None:
        conn_text = cio.connection_to_str(D)
        (outdir / "connection.txt").write_text(conn_text)
        D2 = cio.parse_connection(conn_text, P2)
        round_trip = round_trip and cio.connection_to_str(D2) == conn_text
    report.check("serialization-roundtrip", round_trip, str(outdir))


def cmd_generate(args, report):
    outdir = Path(args.out)
    if args.kind == "clutch":
        P, D = bn.clutch_bundle(args.n)
        _write_generated(outdir, P, D, report)
    elif args.kind == "trivial":
        X = _parse_space(args.space)
        alg = la.lie_algebra(args.group)
        P = bn.trivial_bundle(X, alg)
        report.check("bundle-valid", bn.validate_bundle(P).ok)
        _write_generated(outdir, P, None, report)
    elif args.kind == "horn-demo":
        H = sc.horn(args.n, args.k)
        P = bn.random_u1_bundle(H.space, random.Random(args.seed))
        filled, cmap = bn.horn_fill_bundle(H, P)
        back = bn.restrict_bundle_to_horn(filled, H, cmap)
        report.check("filler-restriction", back.transitions == P.transitions)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "horn-space.txt").write_text(cio.simplicial_set_to_str(H.space))
        (outdir / "horn-bundle.txt").write_text(cio.bundle_to_str(P))
        (outdir / "filled-space.txt").write_text(cio.simplicial_set_to_str(filled.base))
        (outdir / "filled-bundle.txt").write_text(cio.bundle_to_str(filled))
        ok = cio.parse_bundle((outdir / "filled-bundle.txt").read_text(), filled.base).transitions == filled.transitions
        report.check("serialization-roundtrip", ok, str(outdir))
    else:
        raise UsageError(f"unknown generate kind {args.kind!r}")
    return report


def cmd_horn_fill(args, report):
    try:
        H = sc.horn(args.n, args.k)
    except sc.InvalidHornError as e:
        raise UsageError(str(e))
    P = bn.random_u1_bundle(H.space, random.Random(args.seed))
    report.check("input-valid", bn.validate_bundle(P).ok)
    filled, cmap = bn.horn_fill_bundle(H, P)
    report.check("filler-valid", bn.validate_bundle(filled).ok)
    back = bn.restrict_bundle_to_horn(filled, H, cmap)
    report.check("restriction-equality", back.transitions == P.transitions)
    filled2, _ = bn.horn_fill_bundle(H, back)
    back2 = bn.restrict_bundle_to_horn(filled2, H, cmap)
    report.check("refill-stability", back2.transitions == back.transitions)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "horn-bundle.txt").write_text(cio.bundle_to_str(P))
        (outdir / "filled-bundle.txt").write_text(cio.bundle_to_str(filled))
    return report


def cmd_reznikov(args, report):
    if args.mode == "exact":
        raise UsageError("reznikov quadrature is float-only; pass --mode float")
    if args.order < 2:
        raise UsageError("quadrature order must be >= 2")
    su2 = la.lie_algebra("su2")
    rng = np.random.default_rng(args.seed)
    rho = la.reznikov_pullback(args.k, args.order)
    if args.k == 1:
        worst = 0.0
        for _ in range(args.probes):
            m = su2.element_matrix_float(rng.uniform(-1, 1, 3))
            worst = max(worst, abs(rho.eval([m])))
        report.add(f"max |value|: {worst:.3e}")
        report.check("vanishing", worst < 1e-10)
    elif args.k == 2:
        lam = []
        for _ in range(args.probes):
            m = su2.element_matrix_float(rng.uniform(-1, 1, 3))
            lam.append(rho.eval([m, m]) / (m @ m).trace().real)
        lam = np.array(lam)
        spread = float((lam.max() - lam.min()) / abs(lam.mean()))
        report.add(f"lambda: {lam.mean():.12f}")
        report.add(f"relative spread: {spread:.3e}")
        report.check("proportional-to-trace-form", spread < 1e-6)
    else:
        worst = 0.0
        for _ in range(args.probes):
            m = su2.element_matrix_float(rng.uniform(-1, 1, 3))
            worst = max(worst, abs(rho.eval([m] * args.k)))
        report.add(f"max |diagonal value|: {worst:.3e}")
        report.check("odd-vanishing" if args.k % 2 else "evaluated", args.k % 2 == 0 or worst < 1e-10)
    return report


def cmd_verify(args, report):
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    for s in suites:
        if s not in SUITES:
            raise UsageError(f"unknown suite {s!r}")
    for name, ok, detail in run_suite(suites, seed=args.seed):
        report.check(name, ok, detail)
    return report


def build_parser():
    p = argparse.ArgumentParser(prog="chernweil", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--mode", choices=["exact", "float"], default="exact")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("betti", help="rational betti numbers of a space")
    sp.add_argument("--space", required=True)
    sp.add_argument("--max-dim", type=int, default=None)
    common(sp)

    sp = sub.add_parser("chern", help="characteristic cochain of a bundle")
    sp.add_argument("--bundle", required=True, help="clutch:N or a bundle file")
    sp.add_argument("--space", default=None)
    sp.add_argument("--connection", default=None)
    sp.add_argument("--poly", default="chern:1")
    common(sp)

    sp = sub.add_parser("clutch", help="build clutch(n) and check integrality")
    sp.add_argument("--n", type=int, required=True)
    common(sp)

    sp = sub.add_parser("generate", help="write example inputs to files")
    sp.add_argument("kind", choices=["clutch", "trivial", "horn-demo"])
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--space", default="boundary-sphere:2")
    sp.add_argument("--group", default="u1")
    common(sp)

    sp = sub.add_parser("horn-fill", help="fill a random horn bundle")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    common(sp)

    sp = sub.add_parser("reznikov", help="integrated-Hamiltonian functional on su2")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--order", type=int, default=32)
    sp.add_argument("--probes", type=int, default=100)
    common(sp)

    sp = sub.add_parser("verify", help="run the invariant suites")
    sp.add_argument("--suite", default="all")
    common(sp)
    return p


COMMANDS = {
    "betti": cmd_betti,
    "chern": cmd_chern,
    "clutch": cmd_clutch,
    "generate": cmd_generate,
    "horn-fill": cmd_horn_fill,
    "reznikov": cmd_reznikov,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    echo = " ".join(argv if argv is not None else sys.argv[1:])
    report = RunReport(echo, args.seed, args.mode)
    try:
        report = COMMANDS[args.command](args, report)
    except (UsageError, cio.ParseError, FileNotFoundError, sc.InvalidHornError) as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE_ERROR
    except MathError as e:
        report.check("validation", False, str(e))
        text = report.finish()
        sys.stdout.write(text)
        if args.out and args.command != "generate":
            Path(args.out).write_text(text)
        return MATH_FAILURE
    text = report.finish()
    sys.stdout.write(text)
    if args.out and args.command not in ("generate", "clutch", "horn-fill"):
        Path(args.out).write_text(text)
    return MATH_FAILURE if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
