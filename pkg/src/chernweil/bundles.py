"""Simplicial G-bundles in trivialized per-simplex charts.

Every nondegenerate simplex carries the chart Delta^d x G; a face map
into a simplex is a bundle map (t, g) |-> (delta_i(t), phi(t) g) for a
group-valued transition phi, stored as an ordered product of
exponentials of Lie-algebra-valued polynomials.  Degenerate simplices
implicitly carry the pullback of their core's chart along the collapse,
with identity comparison maps, so the whole functor is determined by
finitely much data.

Connections are Lie-algebra-valued polynomial 1-forms per chart, tied
together by the trivialized gauge rule

    A_face = Ad_{phi^{-1}}(delta_i^* A) + phi^{-1} d phi.

For abelian groups (and for identity transitions) every check here is
exact polynomial identity; otherwise the differential of the exponential
is handled by truncated series and checks are sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .forms import AffineMap, FaceConsistencyError, PolyForm, bubble, random_poly, whitney_extend
from .poly import Poly
from .scalars import Scalar
from .simplicial import (
    SimplexId,
    compose_monotone,
    interval_projection,
    mono_skip,
    product_with_interval,
    word_epi,
)


class BundleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lie-algebra-valued polynomials and forms (coordinates in a fixed basis)


class LieValuedPoly:
    """g-valued polynomial map on Delta^dim, in basis coordinates."""

    __slots__ = ("algebra", "dim", "coords")

    def __init__(self, algebra, dim, coords):
        self.algebra = algebra
        self.dim = dim
        self.coords = list(coords)

    @staticmethod
    def zero(algebra, dim):
        return LieValuedPoly(algebra, dim, [Poly.zero(dim)] * algebra.dim)

    def is_zero(self):
        return all(p.is_zero() for p in self.coords)

    def __add__(self, other):
        return LieValuedPoly(self.algebra, self.dim, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return LieValuedPoly(self.algebra, self.dim, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (
            isinstance(other, LieValuedPoly)
            and self.algebra is other.algebra
            and self.coords == other.coords
        )

    def pullback(self, amap):
        coords = amap.coords()
        return LieValuedPoly(
            self.algebra,
            amap.source_dim,
            [p.compose(coords, source_dim=amap.source_dim) for p in self.coords],
        )

    def eval_matrix(self, point):
        c = [p.eval_complex(point) for p in self.coords]
        return self.algebra.element_matrix_float(c)

    def as_one_form_d(self):
        """The 1-form d p of this 0-form."""
        out = []
        for p in self.coords:
            comps = {}
            for j in range(self.dim):
                dp = p.diff(j)
                if not dp.is_zero():
                    comps[(j,)] = dp
            out.append(PolyForm(self.dim, 1, comps))
        return LieValuedForm(self.algebra, self.dim, 1, out)


class LieValuedForm:
    """g-valued polynomial differential form, one PolyForm per basis vector."""

    __slots__ = ("algebra", "dim", "deg", "coords")

    def __init__(self, algebra, dim, deg, coords):
        self.algebra = algebra
        self.dim = dim
        self.deg = deg
        self.coords = list(coords)

    @staticmethod
    def zero(algebra, dim, deg=1):
        return LieValuedForm(algebra, dim, deg, [PolyForm.zero(dim, deg)] * algebra.dim)

    def is_zero(self):
        return all(f.is_zero() for f in self.coords)

    def __add__(self, other):
        return LieValuedForm(self.algebra, self.dim, self.deg, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return LieValuedForm(self.algebra, self.dim, self.deg, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LieValuedForm(self.algebra, self.dim, self.deg, [f.scale(c) for f in self.coords])

    def __eq__(self, other):
        return (
            isinstance(other, LieValuedForm)
            and self.algebra is other.algebra
            and self.deg == other.deg
            and self.coords == other.coords
        )

    def d(self):
        return LieValuedForm(self.algebra, self.dim, self.deg + 1, [f.d() for f in self.coords])

    def pullback(self, amap):
        return LieValuedForm(self.algebra, amap.source_dim, self.deg, [f.pullback(amap) for f in self.coords])

    def bracket_wedge(self, other):
        """[A ^ B] via the structure constants; degree adds."""
        alg = self.algebra
        out = [PolyForm.zero(self.dim, self.deg + other.deg) for _ in range(alg.dim)]
        for a in range(alg.dim):
            fa = self.coords[a]
            if fa.is_zero():
                continue
            for b in range(alg.dim):
                if a == b:
                    continue
                fb = other.coords[b]
                if fb.is_zero():
                    continue
                coeffs = alg.structure[(a, b)] if a < b else alg.structure[(b, a)]
                sgn = Fraction(1 if a < b else -1)
                w = fa.wedge(fb)
                for c, s in enumerate(coeffs):
                    if not s.is_zero():
                        out[c] = out[c] + w.scale(s * sgn)
        return LieValuedForm(alg, self.dim, self.deg + other.deg, out)

    def eval_matrix_coeffs(self, point):
        """Evaluate each form component to a float matrix at a point."""
        out = {}
        for a, f in enumerate(self.coords):
            for I, p in f.comps.items():
                v = p.eval_complex(point)
                if I not in out:
                    out[I] = np.zeros((self.algebra.n, self.algebra.n), dtype=complex)
                out[I] = out[I] + v * self.algebra.basis_float[a]
        return out

    def matrix_entries(self):
        """Assemble the matrix of PolyForms (for invariant-polynomial input)."""
        n = self.algebra.n
        zero = PolyForm.zero(self.dim, self.deg)
        mat = [[zero for _ in range(n)] for _ in range(n)]
        for a, f in enumerate(self.coords):
            if f.is_zero():
                continue
            basis = self.algebra.basis[a]
            for r in range(n):
                for c in range(n):
                    v = basis[r][c]
                    if not v.is_zero():
                        mat[r] = list(mat[r])
                        mat[r][c] = mat[r][c] + f.scale(v)
        return mat


# ---------------------------------------------------------------------------
# transitions


class TransitionMap:
    """Ordered product of exponentials exp(p_1) exp(p_2) ... exp(p_r).

    Abelian factors are merged eagerly, which makes the representation
    canonical for u1 and keeps syntactic equality meaningful there.
    """

    __slots__ = ("algebra", "dim", "factors")

    def __init__(self, algebra, dim, factors):
        factors = [f for f in factors if not f.is_zero()]
        if algebra.is_abelian and len(factors) > 1:
            total = factors[0]
            for f in factors[1:]:
                total = total + f
            factors = [] if total.is_zero() else [total]
        self.algebra = algebra
        self.dim = dim
        self.factors = factors

    @staticmethod
    def identity(algebra, dim):
        return TransitionMap(algebra, dim, [])

    @staticmethod
    def single(p):
        return TransitionMap(p.algebra, p.dim, [p])

    def is_identity(self):
        return not self.factors

    def pullback(self, amap):
        return TransitionMap(self.algebra, amap.source_dim, [f.pullback(amap) for f in self.factors])

    def compose(self, other):
        """Pointwise product self(t) * other(t)."""
        return TransitionMap(self.algebra, self.dim, self.factors + other.factors)

    def inverse(self):
        return TransitionMap(self.algebra, self.dim, [-f for f in reversed(self.factors)])

    def log_total(self):
        """Sum of factor logs; exact group log for abelian algebras."""
        if not self.algebra.is_abelian:
            raise BundleError("log_total is only defined for abelian groups")
        total = LieValuedPoly.zero(self.algebra, self.dim)
        for f in self.factors:
            total = total + f
        return total

    def evaluate(self, point):
        from scipy.linalg import expm

        g = np.eye(self.algebra.n, dtype=complex)
        for f in self.factors:
            g = g @ expm(f.eval_matrix(point))
        return g

    def __eq__(self, other):
        return (
            isinstance(other, TransitionMap)
            and self.algebra is other.algebra
            and self.dim == other.dim
            and self.factors == other.factors
        )

    def __repr__(self):
        return f"TransitionMap({self.algebra.name}, dim={self.dim}, {len(self.factors)} factors)"


def _sample_points(dim, count, seed):
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        w = rng.dirichlet(np.ones(dim + 1))
        pts.append(list(w[1:]))
    return pts


def transitions_equal(t1, t2, tol=1e-9, samples=7, seed=0):
    """Group-level equality of two transition maps.

    Abelian: exact; the logs must differ by a constant in i*tau*Z
    (exp of such a constant is the identity).  Otherwise: sampled
    matrix comparison at interior points.
    """
    if t1.algebra is not t2.algebra or t1.dim != t2.dim:
        return False
    alg = t1.algebra
    if alg.is_abelian:
        diff = t1.log_total() - t2.log_total()
        for p in diff.coords:
            nonconst = {e: c for e, c in p.terms.items() if any(e)}
            if nonconst:
                return False
            c = p.terms.get((0,) * p.dim, Scalar.zero())
            # u1 coordinates multiply the basis [[i]]: exp is the identity
            # exactly when the coordinate is an integer multiple of tau
            q = c / Scalar.tau()
            if not q.is_rational() or q.rational_value().denominator != 1:
                return False
        return True
    for pt in _sample_points(t1.dim, samples, seed):
        if np.abs(t1.evaluate(pt) - t2.evaluate(pt)).max() > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# bundle data


class BundleData:
    """Trivialized simplicial G-bundle: one transition per face map."""

    def __init__(self, base, algebra, transitions):
        self.base = base
        self.algebra = algebra
        self.transitions = dict(transitions)

    def transition(self, sid, i):
        return self.transitions[(sid, i)]

    def data_equal(self, other):
        return (
            self.base == other.base
            and self.algebra is other.algebra
            and self.transitions == other.transitions
        )

    def copy(self):
        return BundleData(self.base, self.algebra, dict(self.transitions))


def trivial_bundle(X, algebra):
    transitions = {}
    for d in range(1, X.dim + 1):
        for sid in X.cells(d):
            for i in range(d + 1):
                transitions[(sid, i)] = TransitionMap.identity(algebra, d - 1)
    return BundleData(X, algebra, transitions)


def transition_of_morphism(P, m, sid):
    """Composite transition of the bundle map over the monotone map m
    from Delta^{len(m)-1} into the chart of the nondegenerate simplex sid.

    Peels off face maps at the largest missed vertex (the canonical
    factorization); pure degeneracies contribute identity transitions
    because degenerate simplices carry pulled-back charts.
    """
    d = sid.dim
    hit = set(m)
    missed = [v for v in range(d + 1) if v not in hit]
    if not missed:
        return TransitionMap.identity(P.algebra, len(m) - 1)
    i = max(missed)
    m1 = tuple(v if v < i else v - 1 for v in m)
    tgt, word = P.base.face(sid, i)
    phi = P.transitions[(sid, i)]
    rest = transition_of_morphism(P, compose_monotone(word_epi(word, d - 1), m1), tgt)
    return phi.pullback(AffineMap.from_monotone(m1, d - 1)).compose(rest)


def _route_pair(P, sid, i, j):
    """The two composite transitions into sid's chart over the face pair i<j."""
    d = sid.dim
    mA = mono_skip(d - 1, {j - 1})
    tgt_i, word_i = P.base.face(sid, i)
    restA = transition_of_morphism(P, compose_monotone(word_epi(word_i, d - 1), mA), tgt_i)
    psiA = P.transitions[(sid, i)].pullback(AffineMap.from_monotone(mA, d - 1)).compose(restA)
    mB = mono_skip(d - 1, {i})
    tgt_j, word_j = P.base.face(sid, j)
    restB = transition_of_morphism(P, compose_monotone(word_epi(word_j, d - 1), mB), tgt_j)
    psiB = P.transitions[(sid, j)].pullback(AffineMap.from_monotone(mB, d - 1)).compose(restB)
    return psiA, psiB


@dataclass
class BundleReport:
    ok: bool
    exact: bool
    failures: list = field(default_factory=list)

    def __str__(self):
        head = "pass" if self.ok else "FAIL"
        mode = "exact" if self.exact else "sampled"
        lines = [f"bundle cocycle check: {head} ({mode})"]
        lines += [f"  {f}" for f in self.failures]
        return "\n".join(lines)


def validate_bundle(P, tol=1e-9, seed=0):
    """Cocycle/functoriality check on all composable face pairs."""
    X = P.base
    exact = P.algebra.is_abelian
    failures = []
    for d in range(1, X.dim + 1):
        for sid in X.cells(d):
            for i in range(d + 1):
                t = P.transitions.get((sid, i))
                if t is None:
                    failures.append(f"missing transition ({sid}, {i})")
                elif t.dim != d - 1:
                    failures.append(f"transition ({sid}, {i}) has wrong domain")
    if failures:
        return BundleReport(False, exact, failures)
    for d in range(2, X.dim + 1):
        for sid in X.cells(d):
            for i in range(d + 1):
                for j in range(i + 1, d + 1):
                    psiA, psiB = _route_pair(P, sid, i, j)
                    if not transitions_equal(psiA, psiB, tol=tol, seed=seed):
                        failures.append(f"cocycle fails on {X.name(sid)} faces ({i},{j})")
    return BundleReport(not failures, exact, failures)


def pullback_bundle(f, P):
    """f^* P: charts reindexed along f; equal data under composition."""
    if f.target != P.base:
        raise BundleError("pullback along a map into a different base")
    transitions = {}
    for d in range(1, f.source.dim + 1):
        for sid in f.source.cells(d):
            core, word = f.assignment[sid]
            epi = word_epi(word, d)
            for i in range(d + 1):
                m = compose_monotone(epi, mono_skip(d, {i}))
                transitions[(sid, i)] = transition_of_morphism(P, m, core)
    return BundleData(f.source, P.algebra, transitions)


# ---------------------------------------------------------------------------
# connections


class Connection:
    """Per-simplex g-valued 1-form in the trivialized charts."""

    def __init__(self, bundle, forms):
        self.bundle = bundle
        self.forms = dict(forms)

    def form(self, sid):
        return self.forms[sid]

    def form_on(self, fs):
        sid, word = fs
        f = self.forms[sid]
        if not word:
            return f
        return f.pullback(AffineMap.collapse(word, sid.dim + len(word)))

    def data_equal(self, other):
        return self.bundle.base == other.bundle.base and self.forms == other.forms


def right_log_derivative(t, order=6):
    """(d phi) phi^{-1} for a product of exponentials, as a g-valued 1-form.

    Exact for abelian algebras; otherwise the differential-of-exp series
    sum_m ad_p^m(dp)/(m+1)! is truncated at the given order (error is
    O(|p|^{order+1}), documented for the nonabelian sampled checks).
    """
    alg = t.algebra
    out = LieValuedForm.zero(alg, t.dim, 1)
    prefix = []  # factors applied so far (for Ad conjugation)
    for p in t.factors:
        dp = p.as_one_form_d()
        term = dp
        if not alg.is_abelian:
            acc = dp
            p0 = LieValuedForm(alg, t.dim, 0, [PolyForm.from_poly(c) for c in p.coords])
            cur = dp
            for m in range(1, order + 1):
                cur = p0.bracket_wedge(cur)
                acc = acc + cur.scale(Fraction(1, factorial(m + 1)))
            term = acc
            for q in reversed(prefix):
                term = _ad_exp_form(q, term, order)
        out = out + term
        prefix.append(p)
    return out


def _ad_exp_form(p, X, order=6):
    """Ad_{exp(p)} X = e^{ad_p} X, truncated; exact for abelian."""
    alg = p.algebra
    if alg.is_abelian:
        return X
    p0 = LieValuedForm(alg, p.dim, 0, [PolyForm.from_poly(c) for c in p.coords])
    out = X
    cur = X
    for m in range(1, order + 1):
        cur = p0.bracket_wedge(cur)
        out = out + cur.scale(Fraction(1, factorial(m)))
    return out


def ad_transition_form(t, X, order=6):
    """Ad_{t} X for a transition map t (product of exponentials)."""
    for p in reversed(t.factors):
        X = _ad_exp_form(p, X, order)
    return X


def gauge_prescription(P, D_forms, sid, i, order=6):
    """What delta_i^* A_sid must equal, given the face's assigned form.

    From A_face = Ad_{phi^{-1}}(delta_i^* A) + phi^{-1} d phi:
        delta_i^* A = Ad_phi(A_face) - (d phi) phi^{-1}.
    """
    tgt, word = P.base.face(sid, i)
    f = D_forms[tgt]
    if word:
        f = f.pullback(AffineMap.collapse(word, sid.dim - 1))
    phi = P.transitions[(sid, i)]
    if phi.is_identity():
        return f
    return ad_transition_form(phi, f, order) - right_log_derivative(phi, order)


@dataclass
class ConnectionReport:
    ok: bool
    exact: bool
    worst: float = 0.0
    failures: list = field(default_factory=list)


def _rld_numeric(t, pt, order=18):
    """(d phi) phi^{-1} at a point, per 1-form component index; numpy."""
    from scipy.linalg import expm

    n = t.algebra.n
    out = {}
    prefix = np.eye(n, dtype=complex)
    for p in t.factors:
        pm = p.eval_matrix(pt)
        for j in range(t.dim):
            dpj = t.algebra.element_matrix_float(
                [c.diff(j).eval_complex(pt) for c in p.coords]
            )
            acc = dpj.copy()
            cur = dpj
            for m in range(1, order + 1):
                cur = pm @ cur - cur @ pm
                acc = acc + cur / float(factorial(m + 1))
            term = prefix @ acc @ np.linalg.inv(prefix)
            out[j] = out.get(j, 0) + term
        prefix = prefix @ expm(pm)
    return out, prefix  # prefix is phi(pt)


def validate_connection(P, D, tol=1e-9, seed=0, samples=4):
    """Gauge compatibility across every face map.

    Exact polynomial identity when the algebra is abelian or all
    transitions are identity; otherwise sampled numerically against the
    defining formula A_face = Ad_{phi^{-1}}(delta_i^* A) + phi^{-1}dphi.
    """
    X = P.base
    exact = P.algebra.is_abelian or all(t.is_identity() for t in P.transitions.values())
    failures = []
    worst = 0.0
    for d in range(1, X.dim + 1):
        for sid in X.cells(d):
            A = D.forms[sid]
            for i in range(d + 1):
                actual = A.pullback(AffineMap.face(d, i))
                tgt, word = X.face(sid, i)
                face_form = D.forms[tgt]
                if word:
                    face_form = face_form.pullback(AffineMap.collapse(word, d - 1))
                if exact:
                    want = gauge_prescription(P, D.forms, sid, i)
                    if actual != want:
                        failures.append(f"gauge compatibility fails at ({X.name(sid)}, {i})")
                    continue
                phi = P.transitions[(sid, i)]
                local_worst = 0.0
                for pt in _sample_points(d - 1, samples, seed):
                    fv = face_form.eval_matrix_coeffs(pt)
                    av = actual.eval_matrix_coeffs(pt)
                    rld, g = _rld_numeric(phi, pt)
                    gi = np.linalg.inv(g)
                    for j in range(d - 1):
                        z = np.zeros((P.algebra.n, P.algebra.n), dtype=complex)
                        lhs = fv.get((j,), z)
                        rhs = gi @ (av.get((j,), z) + rld.get(j, z)) @ g
                        local_worst = max(local_worst, float(np.abs(lhs - rhs).max()))
                worst = max(worst, local_worst)
                if local_worst > tol:
                    failures.append(f"gauge compatibility fails at ({X.name(sid)}, {i})")
    return ConnectionReport(not failures, exact, worst, failures)


def construct_connection(P, preset=None, rng=None, noise_degree=1):
    """Skeletal-induction connection constructor.

    Dimension by dimension, each simplex's boundary data is forced by
    the gauge rule from already-assigned faces and extended to the
    interior (whitney_extend per basis coordinate); an optional seeded
    bubble-damped interior term randomizes the output without touching
    the boundary prescriptions.  Inconsistent prescriptions (impossible
    for valid bundles) surface as FaceConsistencyError with the simplex.
    """
    X = P.base
    alg = P.algebra
    forms = {}
    preset = dict(preset or {})
    for d in range(X.dim + 1):
        for sid in X.cells(d):
            if sid in preset:
                forms[sid] = preset[sid]
                continue
            if d == 0:
                forms[sid] = LieValuedForm.zero(alg, 0, 1)
                continue
            prescriptions = {}
            for i in range(d + 1):
                prescriptions[i] = gauge_prescription(P, forms, sid, i)
            coords = []
            for a in range(alg.dim):
                try:
                    coords.append(
                        whitney_extend(d, 1, {i: f.coords[a] for i, f in prescriptions.items()})
                    )
                except FaceConsistencyError as e:
                    raise FaceConsistencyError(f"simplex {X.name(sid)}: {e}") from e
            A = LieValuedForm(alg, d, 1, coords)
            if rng is not None:
                noise = [
                    PolyForm(
                        d,
                        1,
                        {(j,): random_poly(rng, d, noise_degree) * bubble(d) for j in range(d)},
                    )
                    for _ in range(alg.dim)
                ]
                A = A + LieValuedForm(alg, d, 1, noise)
            forms[sid] = A
    return Connection(P, forms)


def random_connection(P, seed):
    import random as _random

    return construct_connection(P, rng=_random.Random(seed))


# ---------------------------------------------------------------------------
# concordance


@dataclass
class ConcordanceConnection:
    """A connection on pr^* P over X x Delta^1 restricting to the ends."""

    product_base: object
    bundle: BundleData
    connection: Connection
    end0: object
    end1: object

    def restrict(self, end):
        """The connection on X obtained along an end inclusion."""
        out = {}
        for sid in end.source.all_cells():
            tid, word = end.assignment[sid]
            if word:
                raise BundleError("end inclusion hit a degenerate cell")
            out[sid] = self.connection.forms[tid]
        return out


def concordance(P, D1, D2):
    """Connection on P x I restricting exactly to D1 and D2 at the ends."""
    X = P.base
    prod, i0, i1 = product_with_interval(X)
    pr = interval_projection(prod, X)
    PP = pullback_bundle(pr, P)
    preset = {}
    for sid in X.all_cells():
        preset[i0.assignment[sid][0]] = D1.forms[sid]
        preset[i1.assignment[sid][0]] = D2.forms[sid]
    D = construct_connection(PP, preset=preset)
    return ConcordanceConnection(prod, PP, D, i0, i1)


# ---------------------------------------------------------------------------
# clutching over the two-disk sphere


def clutch_bundle(n):
    """U(1) bundle over the two-disk sphere with first Chern number n.

    All transitions are trivial except the S-chart's equatorial face 0,
    which carries exp(i n tau t); the packaged connection is

        A_S = i n tau (x2 dx1 - x1 dx2),   A = 0 elsewhere,

    gauge compatible exactly.  Sign conventions are fixed so that the
    winding oracle and the chern:1 pairing against [N] - [S] both
    return +n.
    """
    from .liealg import lie_algebra
    from .simplicial import two_disk_sphere

    alg = lie_algebra("u1")
    X = two_disk_sphere()
    P = trivial_bundle(X, alg)
    S = SimplexId(2, 1)
    # u1 coordinates multiply the basis matrix [[i]]: coordinate n*tau*t
    # is the matrix log i*n*tau*t
    log = LieValuedPoly(alg, 1, [Poly(1, {(1,): Scalar.of(n, 0, 1)})])
    P.transitions[(S, 0)] = TransitionMap.single(log)

    x1, x2 = Poly.var(2, 0), Poly.var(2, 1)
    a_s = PolyForm(2, 1, {(0,): x2.scale(Scalar.of(n, 0, 1)), (1,): x1.scale(Scalar.of(-n, 0, 1))})
    forms = {sid: LieValuedForm.zero(alg, sid.dim, 1) for sid in X.all_cells()}
    forms[S] = LieValuedForm(alg, 2, 1, [a_s])
    return P, Connection(P, forms)


def clutch_winding(P):
    """Discrete winding oracle: signed log increments of the S/N comparison.

    winding = (1/(i tau)) * sum_i (-1)^i [c_i(1) - c_i(0)],
    c_i = log phi_{S,i} - log phi_{N,i}; exact and integral for any
    valid U(1) bundle over the two-disk sphere.
    """
    if not P.algebra.is_abelian:
        raise BundleError("winding oracle needs an abelian group")
    N, S = SimplexId(2, 0), SimplexId(2, 1)
    total = Scalar.zero()
    for i in range(3):
        # u1 basis coordinate = matrix log / i, so divide deltas by tau
        cN = P.transitions[(N, i)].log_total().coords[0]
        cS = P.transitions[(S, i)].log_total().coords[0]
        diff = cS - cN
        delta = diff.eval([1]) - diff.eval([0])
        total = total + delta * Fraction((-1) ** i)
    return total / Scalar.tau()


# ---------------------------------------------------------------------------
# gauge changes and random bundles


def apply_gauge(P, gauges, D=None):
    """Change every chart by a gauge map exp(h_sid).

    gauges: dict sid -> LieValuedPoly on that simplex.  Transitions pick
    up exp(-h_sid o delta_i) phi exp(h_face); a supplied connection is
    transformed only for constant gauges (Ad by a constant matrix, which
    leaves polynomial coefficients polynomial; floats may enter).
    """
    X = P.base
    transitions = {}
    for d in range(1, X.dim + 1):
        for sid in X.cells(d):
            for i in range(d + 1):
                phi = P.transitions[(sid, i)]
                fm = AffineMap.face(d, i)
                h_here = gauges[sid].pullback(fm)
                tgt, word = X.face(sid, i)
                h_face = gauges[tgt]
                if word:
                    h_face = h_face.pullback(AffineMap.collapse(word, d - 1))
                t = TransitionMap(P.algebra, d - 1, [-h_here])
                t = t.compose(phi).compose(TransitionMap(P.algebra, d - 1, [h_face]))
                transitions[(sid, i)] = t
    P2 = BundleData(X, P.algebra, transitions)
    if D is None:
        return P2, None
    from scipy.linalg import expm

    alg = P.algebra
    forms = {}
    for sid in X.all_cells():
        h = gauges[sid]
        if any(p.total_degree() > 0 for p in h.coords):
            raise BundleError("connection gauge transform implemented for constant gauges")
        g = expm(h.eval_matrix([Fraction(0)] * sid.dim))
        gi = np.linalg.inv(g)
        # matrix R of Ad_{g^{-1}} in the chosen basis
        R = np.array([alg.decompose_float(gi @ bf @ g) for bf in alg.basis_float]).T
        coords = []
        for a in range(alg.dim):
            f = PolyForm.zero(sid.dim, 1)
            for b in range(alg.dim):
                c = R[a, b]
                if abs(c) > 1e-15:
                    f = f + D.forms[sid].coords[b].scale(Scalar.from_float(c))
            coords.append(f)
        forms[sid] = LieValuedForm(alg, sid.dim, 1, coords)
    return P2, Connection(P2, forms)


def random_u1_bundle(X, rng, degree=2, windings=True):
    """Seeded random valid U(1) bundle: a gauge change of the trivial
    bundle, plus integer windings on the face-0 transitions of 2-cells
    (exp(i tau m t) is endpoint-trivial, so cocycles survive)."""
    from .liealg import lie_algebra

    alg = lie_algebra("u1")
    gauges = {}
    for sid in X.all_cells():
        p = random_poly(rng, sid.dim, degree)
        gauges[sid] = LieValuedPoly(alg, sid.dim, [p])
    P, _ = apply_gauge(trivial_bundle(X, alg), gauges)
    if windings:
        for sid in X.cells(2):
            m = rng.randrange(-2, 3)
            if m:
                tw = LieValuedPoly(alg, 1, [Poly(1, {(1,): Scalar.of(m, 0, 1)})])
                P.transitions[(sid, 0)] = TransitionMap.single(tw).compose(P.transitions[(sid, 0)])
    return P


# ---------------------------------------------------------------------------
# horn filling


def horn_fill_bundle(H, P):
    """Fill a bundle over the horn Lambda^n_k to one over Delta^n.

    Follows the Kan-property proof shape: the retained faces of the new
    top cell get compensating gauge factors, the top transition over the
    missing face is the identity, and the missing face's own data is
    forced by the cocycle conditions (all twisting is pushed into it).
    Restriction to the horn returns the input data unchanged.  Exact,
    abelian structure groups only.
    """
    from .simplicial import standard_simplex

    if not P.algebra.is_abelian:
        raise BundleError("horn filling implemented for abelian structure groups")
    if P.base != H.space:
        raise BundleError("bundle is not over the horn")
    rep = validate_bundle(P)
    if not rep.ok:
        raise BundleError("input horn data does not validate: " + "; ".join(rep.failures))

    n, k = H.n, H.k
    alg = P.algebra
    delta = standard_simplex(n)
    full = tuple(range(n + 1))
    omit = full[:k] + full[k + 1:]

    horn_of_subset = {s: sid for sid, s in H.cell_subsets.items()}
    delta_of_subset = delta._subset_index
    cell_map = {sid: delta_of_subset[s] for sid, s in H.cell_subsets.items()}

    transitions = {}
    for (sid, i), t in P.transitions.items():
        transitions[(cell_map[sid], i)] = t

    top = delta_of_subset[full]
    fk = delta_of_subset[omit]
    out = BundleData(delta, alg, transitions)

    def face_subset(j):
        return full[:j] + full[j + 1:]

    def known_route(i, m_inner):
        """Composite transition through retained face i along m_inner."""
        sid_h = horn_of_subset[face_subset(i)]
        return transition_of_morphism(P, m_inner, sid_h)

    # choose the compensating top transitions gamma_i (i != k)
    gammas = {}
    others = [i for i in range(n + 1) if i != k]
    for pos, j in enumerate(others):
        if n == 1:
            gammas[j] = TransitionMap.identity(alg, 0)
            continue
        prescriptions = {}
        consts = {}
        for i in others[:pos]:
            # route equality over the cell omitting {i, j}: i < j here
            mA = mono_skip(n - 1, {j - 1})
            mB = mono_skip(n - 1, {i})
            lhs = gammas[i].pullback(AffineMap.from_monotone(mA, n - 1)).compose(known_route(i, mA))
            rhs_known = known_route(j, mB)
            # gamma_j o (face i of its domain) must equal lhs * rhs_known^{-1}
            need = lhs.compose(rhs_known.inverse()).log_total()
            prescriptions[i] = need
        if not prescriptions:
            gammas[j] = TransitionMap.identity(alg, n - 1)
            continue
        # align the free i*tau*Z constants so facet data agree exactly
        keys = sorted(prescriptions)
        base_key = keys[0]
        adjusted = {base_key: prescriptions[base_key]}
        for i in keys[1:]:
            mism = _facet_mismatch_constant(
                prescriptions[base_key], prescriptions[i], base_key, i, n - 1
            )
            adjusted[i] = _shift_constant(prescriptions[i], mism)
        coords = []
        for a in range(alg.dim):
            coords.append(
                whitney_extend(
                    n - 1,
                    0,
                    {i: PolyForm(n - 2, 0, {(): adjusted[i].coords[a]}) for i in keys},
                )
            )
        log = LieValuedPoly(alg, n - 1, [f.component(()) for f in coords])
        gammas[j] = TransitionMap(alg, n - 1, [log])
    gammas[k] = TransitionMap.identity(alg, n - 1)
    for i in range(n + 1):
        out.transitions[(top, i)] = gammas[i]

    # the missing face's data is forced by the cocycle conditions with k
    for i in others:
        m_i = mono_skip(n - 1, {k - 1}) if i < k else mono_skip(n - 1, {k})
        via_i = gammas[i].pullback(AffineMap.from_monotone(m_i, n - 1)).compose(known_route(i, m_i))
        # via k: gamma_k (identity) pulled, then f_k's face transition
        facet_index = i if i < k else i - 1
        out.transitions[(fk, facet_index)] = via_i
    rep = validate_bundle(out)
    if not rep.ok:
        raise BundleError("internal horn filler invariant violated: " + "; ".join(rep.failures))
    return out, cell_map


def _facet_mismatch_constant(pres_a, pres_b, ia, ib, domain_dim):
    """Constant (in i*tau*Z) by which two facet log-prescriptions differ
    on their shared subface; zero when they already agree.

    Facet ia < ib of Delta^{domain_dim}: within facet ia's domain the
    intersection is its face (ib - 1); within facet ib's it is face ia.
    """
    pa = [p.compose(AffineMap.face(domain_dim - 1, ib - 1).coords()) for p in pres_a.coords]
    pb = [p.compose(AffineMap.face(domain_dim - 1, ia).coords()) for p in pres_b.coords]
    consts = []
    for a, b in zip(pa, pb):
        diff = a - b
        nonconst = {e: c for e, c in diff.terms.items() if any(e)}
        if nonconst:
            raise BundleError("horn prescriptions differ by a nonconstant; input invalid")
        consts.append(diff.terms.get((0,) * diff.dim, Scalar.zero()))
    return consts


def _shift_constant(p, consts):
    return LieValuedPoly(
        p.algebra, p.dim, [c + Poly.const(p.dim, v) for c, v in zip(p.coords, consts)]
    )


def restrict_bundle_to_horn(filled, H, cell_map):
    """Pull the filled bundle's data back to the horn's cells."""
    transitions = {}
    for sid in H.space.all_cells():
        for i in range(sid.dim + 1) if sid.dim > 0 else []:
            transitions[(sid, i)] = filled.transitions[(cell_map[sid], i)]
    return BundleData(H.space, filled.algebra, transitions)
