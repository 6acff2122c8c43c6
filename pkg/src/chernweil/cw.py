"""Curvature and the Chern-Weil pipeline.

Per chart the curvature of a connection form A is F = dA + A ^ A (kept
in Lie-algebra coordinates as dA + (1/2)[A ^ A]).  Evaluating an
Ad-invariant symmetric multilinear functional on k curvature slots and
wedging the scalar parts yields the characteristic form; integrating
over every simplex gives a closed cochain whose class is independent of
the connection and natural under pullback.

Two constructions of the characteristic form coexist: the wedge
contraction rho(F, .., F) used on the main path, and the brute-force
alternating-sum-over-permutations formula used as an oracle.  Their
ratio is a single combinatorial constant per arity, measured (never
assumed) by calibrate_cw_constant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .bundles import Connection, LieValuedForm, pullback_bundle
from .forms import AffineMap, PolyForm, SimplicialForm, check_simplicial_form, integrate_to_cochain
from .poly import Poly
from .scalars import Scalar
from .simplicial import Cochain, coboundary, is_coboundary, pairing, pullback_cochain, word_epi


def curvature_form(A):
    """F = dA + A ^ A for one chart's connection form."""
    return A.d() + A.bracket_wedge(A).scale(Fraction(1, 2))


def curvature(D):
    """Per-simplex curvature of a connection; a dict sid -> LieValuedForm."""
    return {sid: curvature_form(A) for sid, A in D.forms.items()}


def bianchi_defect(D):
    """dF + [A ^ F]; identically zero, returned for verification."""
    out = {}
    for sid, A in D.forms.items():
        F = curvature_form(A)
        out[sid] = F.d() + A.bracket_wedge(F)
    return out


def _component_matrices(F):
    """Decompose a matrix-valued form into {index tuple: matrix of Polys}."""
    mat = F.matrix_entries()
    n = len(mat)
    comps = {}
    for r in range(n):
        for c in range(n):
            for I, p in mat[r][c].comps.items():
                if I not in comps:
                    comps[I] = [[Poly.zero(F.dim) for _ in range(n)] for _ in range(n)]
                comps[I][r][c] = p
    return comps


def _sort_sign(seq):
    """Sorted tuple and the sign of the sorting permutation (0 if repeats)."""
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
            elif seq[a] == seq[b]:
                return None, 0
    return tuple(sorted(seq)), sign


def _cw_polyform_wedge(rho, F):
    """rho(F, .., F) with scalar parts wedged; one chart."""
    k = rho.arity
    dim = F.dim
    out = PolyForm.zero(dim, 2 * k)
    comps = _component_matrices(F)
    if not comps:
        return out
    for tup in itertools.product(sorted(comps), repeat=k):
        K, sign = _sort_sign(sum(tup, ()))
        if sign == 0:
            continue
        val = rho.eval([comps[I] for I in tup])
        if isinstance(val, Poly) and val.is_zero():
            continue
        if not isinstance(val, Poly):
            val = Poly.const(dim, val)
        term = PolyForm(dim, 2 * k, {K: val.scale(Fraction(sign))})
        out = out + term
    return out


def cw_form(rho, D):
    """The degree-2k characteristic simplicial form of (rho, D).

    Wedge fast path: rho applied to the curvature's component matrices,
    scalar 2-forms wedged.  Closed and face compatible; zero in
    overflow degrees rather than an error.
    """
    X = D.bundle.base
    Fs = curvature(D)
    forms = {sid: _cw_polyform_wedge(rho, Fs[sid]) for sid in X.all_cells()}
    return SimplicialForm(X, 2 * rho.arity, forms)


def cw_form_permutation(rho, F):
    """One-chart characteristic form by the alternating permutation sum,

        w(v_1,..,v_{2k}) = (1/(2k)!) sum_eta sign(eta)
                            rho(F(v_eta(1), v_eta(2)), ..),

    evaluated on coordinate frames.  Brute force over all (2k)!
    permutations; the oracle side of the calibration check.
    """
    k = rho.arity
    dim = F.dim
    comps = _component_matrices(F)

    out = {}
    for K in itertools.combinations(range(dim), 2 * k):
        total = Poly.zero(dim)
        # rho is symmetric and each slot flips sign under argument swap,
        # so evaluations are memoized on the canonicalized pair multiset
        memo = {}
        for eta in itertools.permutations(range(2 * k)):
            sign = 1
            for a in range(2 * k):
                for b in range(a + 1, 2 * k):
                    if eta[a] > eta[b]:
                        sign = -sign
            pairs = []
            ok = True
            for s in range(k):
                a, b = K[eta[2 * s]], K[eta[2 * s + 1]]
                if a > b:
                    a, b = b, a
                    sign = -sign
                if (a, b) not in comps:
                    ok = False
                    break
                pairs.append((a, b))
            if not ok:
                continue
            key = tuple(sorted(pairs))
            if key not in memo:
                val = rho.eval([comps[p] for p in key])
                if not isinstance(val, Poly):
                    val = Poly.const(dim, val)
                memo[key] = val
            total = total + memo[key].scale(Fraction(sign))
        total = total.scale(Fraction(1, factorial(2 * k)))
        if not total.is_zero():
            out[K] = total
    return PolyForm(dim, 2 * k, out)


def calibrate_cw_constant(rho, F):
    """Measure the constant c with wedge path = c * permutation formula.

    Returns the exact Scalar ratio, or raises if the two forms are not
    proportional (which would signal an implementation bug).
    """
    wedge = _cw_polyform_wedge(rho, F)
    perm = cw_form_permutation(rho, F)
    ratio = None
    for I, p in perm.comps.items():
        q = wedge.component(I)
        for e, c in p.terms.items():
            if c.is_zero():
                continue
            r = q.terms.get(e, Scalar.zero()) / c
            if ratio is None:
                ratio = r
            elif ratio != r:
                raise ValueError("wedge and permutation forms are not proportional")
    if ratio is None:
        raise ValueError("permutation form vanished; calibration needs a generic input")
    if perm.scale(ratio) != wedge:
        raise ValueError("wedge and permutation forms are not proportional")
    return ratio


def cw_cochain(rho, D):
    """alpha = integral of the characteristic form; closed exactly."""
    return integrate_to_cochain(cw_form(rho, D))


def pullback_connection(f, P, D):
    """The pullback connection on f^* P: (f^* D)_a = D_{f(a)} in charts."""
    forms = {}
    for sid in f.source.all_cells():
        core, word = f.assignment[sid]
        m = word_epi(word, sid.dim)
        forms[sid] = D.forms[core].pullback(AffineMap.from_monotone(m, core.dim))
    return Connection(pullback_bundle(f, P), forms)


@dataclass
class VerdictReport:
    ok: bool
    detail: str = ""
    witness: object = None
    certificate: object = None


def connection_independence(P, D1, D2, rho):
    """Exact coboundary witness for alpha(D1) - alpha(D2).

    The difference of the characteristic cochains of two connections on
    the same bundle is solved for db = diff; failure returns the cycle
    certificate (a negative control, or an implementation bug).
    """
    a1 = cw_cochain(rho, D1)
    a2 = cw_cochain(rho, D2)
    diff = a1 - a2
    status, data = is_coboundary(P.base, diff)
    if status == "witness":
        check = coboundary(P.base, data)
        if not (check - diff).is_zero():
            raise AssertionError("solver returned an invalid witness")
        return VerdictReport(True, "difference is an exact coboundary", witness=data)
    return VerdictReport(False, "difference pairs nontrivially with a cycle", certificate=data)


def naturality_check(f, P, rho, D):
    """Cochain-level naturality f^*(alpha^{rho,D}) = alpha^{rho, f^*D}.

    The pullback connection makes this an exact equality, not merely a
    class-level one.
    """
    alpha = cw_cochain(rho, D)
    lhs = pullback_cochain(f, alpha)
    Dp = pullback_connection(f, P, D)
    rhs = cw_cochain(rho, Dp)
    same = (lhs - rhs).is_zero()
    return VerdictReport(same, "cochain-level naturality" if same else "naturality violated")


# ---------------------------------------------------------------------------
# quadrature oracle for the classical comparison


def quadrature_integrate(form, order=12):
    """Float integral of a top-degree form over Delta^d by a product
    Gauss-Legendre rule under the Duffy (collapsed-coordinates) map.
    Independent of the exact factorial-identity path."""
    d = form.dim
    if form.deg != d:
        raise ValueError("quadrature oracle needs a top-degree form")
    if d == 0:
        return form.component(()).eval_complex([])
    p = form.component(tuple(range(d)))
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    total = 0.0 + 0.0j
    for idx in itertools.product(range(order), repeat=d):
        u = [nodes[i] for i in idx]
        w = 1.0
        for i in idx:
            w *= weights[i]
        x = []
        remaining = 1.0
        jac = 1.0
        for ui in u:
            xi = ui * remaining
            x.append(xi)
            jac *= remaining
            remaining -= xi
        total += w * jac * p.eval_complex(x)
    return total


def classical_pairing_quadrature(rho, D, cycle, order=12):
    """Quadrature evaluation of the characteristic pairing with a cycle."""
    omega = cw_form(rho, D)
    total = 0.0 + 0.0j
    for sid, c in cycle.coeffs.items():
        total += float(c) * quadrature_integrate(omega.form(sid), order)
    return total


def classical_agreement_check(P, D, rho, cycle, tol=1e-8, order=12):
    """Simplicial pairing vs the independent global quadrature."""
    alpha = cw_cochain(rho, D)
    simplicial = pairing(alpha, cycle)
    classical = classical_pairing_quadrature(rho, D, cycle, order)
    diff = abs(simplicial.to_complex() - classical)
    return VerdictReport(diff <= tol, f"|simplicial - classical| = {diff:.3e}"), simplicial, classical


# ---------------------------------------------------------------------------
# reporting


@dataclass
class ClassReport:
    """The CLI's record of one characteristic-class computation."""

    poly_name: str
    bundle_name: str
    closed: bool
    pairings: list = field(default_factory=list)
    witness_present: bool = False
    calibration: object = None

    def machine_line(self):
        vals = []
        for v in self.pairings:
            if isinstance(v, Scalar) and v.is_rational():
                vals.append(str(v.rational_value()))
            elif isinstance(v, Scalar):
                vals.append(repr(v.to_complex()))
            else:
                vals.append(repr(v))
        w = "present" if self.witness_present else "absent"
        return (
            f"class rho={self.poly_name} bundle={self.bundle_name}: "
            f"closed={'yes' if self.closed else 'no'} pairings=[{', '.join(vals)}] witness={w}"
        )


def class_report(rho, P, D, cycles, bundle_name="bundle"):
    alpha = cw_cochain(rho, D)
    closed = coboundary(P.base, alpha).is_zero()
    pairings = [pairing(alpha, z) for z in cycles]
    omega = cw_form(rho, D)
    violations = check_simplicial_form(omega)
    if violations and P.algebra.is_abelian:
        closed = False
    return ClassReport(rho.provenance, bundle_name, closed, pairings)
