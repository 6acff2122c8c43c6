"""Small matrix Lie algebras and Ad-invariant polynomials.

Supported algebras: u1, su2, so3, and un / sun for n <= 4.  Basis
matrices have Gaussian-rational entries, so brackets and invariant
polynomial evaluations are exact whenever the inputs are.  The su2
basis is the halved-Pauli one, e_a = -(i/2) sigma_a, normalized so that
[e1, e2] = e3.

Invariant polynomials are symmetric multilinear functionals evaluated
on matrices; the evaluators are written against generic ring entries so
the same code runs on exact Scalars, floats, and polynomial-valued
matrices (which is how the Chern-Weil form is assembled).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

import numpy as np
from scipy.linalg import expm

from .scalars import TAU, Scalar


class LieAlgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# generic matrix helpers over duck-typed entries


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for r in range(n):
        row = []
        for c in range(p):
            s = A[r][0] * B[0][c]
            for k in range(1, m):
                s = s + A[r][k] * B[k][c]
            row.append(s)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_trace(A):
    s = A[0][0]
    for i in range(1, len(A)):
        s = s + A[i][i]
    return s


def scale_value(v, frac):
    """Multiply a duck-typed ring element by an exact rational."""
    if isinstance(v, (complex, float, int)):
        return v * (frac.numerator / frac.denominator)
    return v * frac


def mat_scale(A, frac):
    return [[scale_value(v, frac) for v in row] for row in A]


def _det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    total = None
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = A[0][perm[0]]
        for i in range(1, n):
            term = term * A[i][perm[i]]
        term = scale_value(term, Fraction(sign))
        total = term if total is None else total + term
    return total


def elementary_invariant(A, k):
    """Sum of the principal k x k minors (the degree-k coefficient of
    the characteristic polynomial det(I + tA))."""
    n = len(A)
    total = None
    for rows in itertools.combinations(range(n), k):
        minor = [[A[r][c] for c in rows] for r in rows]
        d = _det(minor)
        total = d if total is None else total + d
    return total


# ---------------------------------------------------------------------------
# algebras


def _S(re=0, im=0):
    return Scalar.of(re, im)


def _zeros(n):
    return [[_S() for _ in range(n)] for _ in range(n)]


def _basis_u1():
    return [[[_S(0, 1)]]]


def _basis_su2():
    # e_a = -(i/2) sigma_a;  [e1, e2] = e3 and cyclic
    h = Fraction(1, 2)
    e1 = [[_S(), _S(0, -h)], [_S(0, -h), _S()]]
    e2 = [[_S(), _S(-h)], [_S(h), _S()]]
    e3 = [[_S(0, -h), _S()], [_S(), _S(0, h)]]
    return [e1, e2, e3]


def _basis_so3():
    L1 = [[_S(), _S(), _S()], [_S(), _S(), _S(-1)], [_S(), _S(1), _S()]]
    L2 = [[_S(), _S(), _S(1)], [_S(), _S(), _S()], [_S(-1), _S(), _S()]]
    L3 = [[_S(), _S(-1), _S()], [_S(1), _S(), _S()], [_S(), _S(), _S()]]
    return [L1, L2, L3]


def _basis_un(n):
    out = []
    for k in range(n):
        m = _zeros(n)
        m[k][k] = _S(0, 1)
        out.append(m)
    for k in range(n):
        for l in range(k + 1, n):
            m = _zeros(n)
            m[k][l] = _S(1)
            m[l][k] = _S(-1)
            out.append(m)
            m = _zeros(n)
            m[k][l] = _S(0, 1)
            m[l][k] = _S(0, 1)
            out.append(m)
    return out


def _basis_sun(n):
    out = []
    for k in range(n - 1):
        m = _zeros(n)
        m[k][k] = _S(0, 1)
        m[k + 1][k + 1] = _S(0, -1)
        out.append(m)
    for k in range(n):
        for l in range(k + 1, n):
            m = _zeros(n)
            m[k][l] = _S(1)
            m[l][k] = _S(-1)
            out.append(m)
            m = _zeros(n)
            m[k][l] = _S(0, 1)
            m[l][k] = _S(0, 1)
            out.append(m)
    return out


def _scalar_solve(columns, rhs):
    """Solve sum_j x_j columns[j] = rhs exactly over tau-free Scalars."""
    m = len(rhs)
    n = len(columns)
    A = [[columns[j][i] for j in range(n)] for i in range(m)]
    b = list(rhs)
    r = 0
    piv_cols = []
    for c in range(n):
        piv = next((i for i in range(r, m) if not A[i][c].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        b[r], b[piv] = b[piv], b[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        b[r] = b[r] / pv
        for i in range(m):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                b[i] = b[i] - b[r] * f
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if not b[i].is_zero():
            raise LieAlgebraError("matrix not in the span of the basis")
    x = [Scalar.zero()] * n
    for i, c in enumerate(piv_cols):
        x[c] = b[i]
    return x


class LieData:
    """A named matrix Lie algebra with exact basis and structure constants."""

    def __init__(self, name, basis, group_checks):
        self.name = name
        self.basis = basis
        self.dim = len(basis)
        self.n = len(basis[0])
        self.group_checks = group_checks  # list of constraint names
        self.basis_float = [
            np.array([[v.to_complex() for v in row] for row in b]) for b in basis
        ]
        self._flat = [
            [b[r][c] for r in range(self.n) for c in range(self.n)] for b in basis
        ]
        self.structure = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                m = mat_sub(mat_mul(basis[a], basis[b]), mat_mul(basis[b], basis[a]))
                flat = [m[r][c] for r in range(self.n) for c in range(self.n)]
                self.structure[(a, b)] = _scalar_solve(self._flat, flat)

    @property
    def is_abelian(self):
        return all(all(c.is_zero() for c in v) for v in self.structure.values())

    def element(self, coords):
        return LieElement(self, [Scalar.coerce(c) for c in coords])

    def zero(self):
        return self.element([Scalar.zero()] * self.dim)

    def decompose(self, matrix):
        """Exact coordinates of a Scalar matrix in the basis."""
        flat = [matrix[r][c] for r in range(self.n) for c in range(self.n)]
        return self.element(_scalar_solve(self._flat, flat))

    def decompose_float(self, matrix):
        B = np.array([bf.flatten() for bf in self.basis_float]).T
        coords, *_ = np.linalg.lstsq(B, np.asarray(matrix, dtype=complex).flatten(), rcond=None)
        return coords

    def bracket_coords(self, x, y):
        out = [Scalar.zero()] * self.dim
        for a in range(self.dim):
            xa = x[a]
            if xa.is_zero():
                continue
            for b in range(self.dim):
                yb = y[b]
                if yb.is_zero() or a == b:
                    continue
                coeffs = self.structure[(a, b)] if a < b else self.structure[(b, a)]
                sgn = 1 if a < b else -1
                for c, s in enumerate(coeffs):
                    if not s.is_zero():
                        out[c] = out[c] + xa * yb * s * Fraction(sgn)
        return out

    def random_element(self, rng, scale=1.0):
        return np.array([rng.uniform(-scale, scale) for _ in range(self.dim)])

    def element_matrix_float(self, coords):
        m = np.zeros((self.n, self.n), dtype=complex)
        for c, b in zip(coords, self.basis_float):
            m = m + complex(c) * b
        return m

    def __repr__(self):
        return f"LieData({self.name})"


class LieElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        self.coords = list(coords)

    def matrix(self):
        n = self.algebra.n
        out = _zeros(n)
        for c, b in zip(self.coords, self.algebra.basis):
            if not Scalar.coerce(c).is_zero():
                for r in range(n):
                    for s in range(n):
                        out[r][s] = out[r][s] + b[r][s] * c
        return out

    def matrix_float(self):
        return self.algebra.element_matrix_float([Scalar.coerce(c).to_complex() for c in self.coords])

    def __add__(self, other):
        return LieElement(self.algebra, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return LieElement(self.algebra, [a - b for a, b in zip(self.coords, other.coords)])

    def scale(self, c):
        return LieElement(self.algebra, [a * c for a in self.coords])


_REGISTRY = {}


def lie_algebra(name):
    """Look up (and cache) one of the supported algebras by name."""
    if name in _REGISTRY:
        return _REGISTRY[name]
    if name == "u1":
        data = LieData("u1", _basis_u1(), ["unitary"])
    elif name == "su2":
        data = LieData("su2", _basis_su2(), ["unitary", "special"])
    elif name == "so3":
        data = LieData("so3", _basis_so3(), ["real", "orthogonal", "special"])
    elif name.startswith("su") and name[2:].isdigit() and 2 <= int(name[2:]) <= 4:
        data = LieData(name, _basis_sun(int(name[2:])), ["unitary", "special"])
    elif name.startswith("u") and name[1:].isdigit() and 1 <= int(name[1:]) <= 4:
        data = LieData(name, _basis_un(int(name[1:])), ["unitary"])
    else:
        raise LieAlgebraError(f"unsupported algebra {name!r}")
    _REGISTRY[name] = data
    return data


# ---------------------------------------------------------------------------
# group-level operations (float)


class GroupElement:
    def __init__(self, algebra, matrix, log_coords=None):
        self.algebra = algebra
        self.matrix = np.asarray(matrix, dtype=complex)
        self.log_coords = log_coords

    def inverse(self):
        return GroupElement(self.algebra, np.linalg.inv(self.matrix))

    def constraint_violation(self):
        m = self.matrix
        v = 0.0
        checks = self.algebra.group_checks
        if "unitary" in checks or "orthogonal" in checks:
            v = max(v, float(np.abs(m.conj().T @ m - np.eye(len(m))).max()))
        if "special" in checks:
            v = max(v, abs(np.linalg.det(m) - 1.0))
        if "real" in checks:
            v = max(v, float(np.abs(m.imag).max()))
        return v


def exp_element(x):
    """Group exponential of a Lie element (float)."""
    if isinstance(x, LieElement):
        g = GroupElement(x.algebra, expm(x.matrix_float()), log_coords=x.coords)
    else:
        raise TypeError("exp_element expects a LieElement")
    return g


def Ad(g, x):
    """Adjoint action; returns float coordinates in the algebra's basis."""
    alg = g.algebra if isinstance(g, GroupElement) else x.algebra
    gm = g.matrix if isinstance(g, GroupElement) else np.asarray(g, dtype=complex)
    xm = x.matrix_float() if isinstance(x, LieElement) else np.asarray(x, dtype=complex)
    return alg.decompose_float(gm @ xm @ np.linalg.inv(gm))


def bracket(x, y):
    if x.algebra is not y.algebra:
        raise LieAlgebraError("bracket of elements from different algebras")
    return LieElement(x.algebra, x.algebra.bracket_coords(x.coords, y.coords))


def ad_exp_series(x, y, t=1.0, order=6):
    """Truncated e^{t ad_x} y (float coordinates)."""
    alg = x.algebra
    acc = np.array([Scalar.coerce(c).to_complex() for c in y.coords])
    term = acc.copy()
    xc = [Scalar.coerce(c) for c in x.coords]
    cur = [Scalar.coerce(c) for c in y.coords]
    out = np.array([c.to_complex() for c in cur])
    for m in range(1, order + 1):
        cur = alg.bracket_coords(xc, cur)
        out = out + (t**m / factorial(m)) * np.array([c.to_complex() for c in cur])
    return out


# ---------------------------------------------------------------------------
# invariant polynomials


class InvariantPolynomial:
    """Symmetric multilinear Ad-invariant functional on the algebra.

    The evaluator receives a list of arity-many square matrices (entries
    may be Scalars, numbers, or polynomial ring elements) and returns a
    single ring element.  LieElements are accepted and converted.
    """

    def __init__(self, algebra, arity, evaluator, provenance, symmetric_multilinear=True):
        self.algebra = algebra
        self.arity = arity
        self._evaluator = evaluator
        self.provenance = provenance
        self.symmetric_multilinear = symmetric_multilinear

    def eval(self, args):
        if len(args) != self.arity:
            raise ValueError(f"{self.provenance} has arity {self.arity}, got {len(args)}")
        mats = []
        for a in args:
            if isinstance(a, LieElement):
                mats.append(a.matrix())
            elif isinstance(a, np.ndarray):
                mats.append([[complex(v) for v in row] for row in a])
            else:
                mats.append(a)
        return self._evaluator(mats)

    def eval_diag(self, x):
        return self.eval([x] * self.arity)


def sym_trace_poly(algebra, k):
    """(x_1,..,x_k) -> (1/k!) sum_pi tr(x_{pi(1)} ... x_{pi(k)})."""
    if k < 1:
        raise ValueError("sym_trace arity must be >= 1")

    def evaluator(mats):
        total = None
        for perm in itertools.permutations(range(k)):
            prod = mats[perm[0]]
            for i in perm[1:]:
                prod = mat_mul(prod, mats[i])
            t = mat_trace(prod)
            total = t if total is None else total + t
        return scale_value(total, Fraction(1, factorial(k)))

    return InvariantPolynomial(algebra, k, evaluator, f"symtrace:{k}")


def _scale_by_inv_itau(v):
    if isinstance(v, (complex, float, int)):
        return v / (1j * TAU)
    # Scalar and Poly both divide exactly by the monomial i*tau
    return v * (Scalar.one() / Scalar.of(0, 1, 1))


def chern_polynomial(algebra, k):
    """Polarized degree-k Chern polynomial on u(n)/su(n).

    Defined through det(I + t X / (i tau)): the k'th coefficient is
    polarized into a symmetric multilinear functional.  The i/(2 pi)
    normalization is carried by the tau symbol, so on u1 the element
    i*a*tau maps to a.
    """
    if not (algebra.name.startswith("u") or algebra.name.startswith("su")):
        raise LieAlgebraError(f"chern polynomial undefined for {algebra.name}")

    def evaluator(mats):
        scaled = [[[_scale_by_inv_itau(v) for v in row] for row in m] for m in mats]
        total = None
        for size in range(1, k + 1):
            for subset in itertools.combinations(range(k), size):
                m = scaled[subset[0]]
                for i in subset[1:]:
                    m = mat_add(m, scaled[i])
                term = scale_value(elementary_invariant(m, k), Fraction((-1) ** (k - size)))
                total = term if total is None else total + term
        return scale_value(total, Fraction(1, factorial(k)))

    return InvariantPolynomial(algebra, k, evaluator, f"chern:{k}")


def polarize(algebra, p, k):
    """Polarize a homogeneous degree-k polynomial on the algebra.

    p is a callable on coordinate vectors (exact Fractions supported).
    Returns the symmetric multilinear rho with rho(x,..,x) = p(x).
    Raises if p fails exact homogeneity probes.
    """
    probes = [
        [Fraction(1, 2)] * algebra.dim,
        [Fraction(2 * i + 1, 3) for i in range(algebra.dim)],
        [Fraction((-1) ** i * (i + 2), 5) for i in range(algebra.dim)],
    ]
    for coords in probes:
        for t in (2, 3):
            lhs = p([t * c for c in coords])
            rhs = (Fraction(t) ** k) * p(coords)
            if lhs != rhs:
                raise LieAlgebraError(f"polynomial is not homogeneous of degree {k}")

    def evaluator(mats):
        elems = [algebra.decompose(m) if not isinstance(m, LieElement) else m for m in mats]
        coord_vectors = [e.coords for e in elems]
        total = None
        for size in range(1, k + 1):
            for subset in itertools.combinations(range(k), size):
                v = [Scalar.zero()] * algebra.dim
                for i in subset:
                    v = [a + b for a, b in zip(v, coord_vectors[i])]
                term = scale_value(p(v), Fraction((-1) ** (k - size)))
                total = term if total is None else total + term
        return scale_value(total, Fraction(1, factorial(k)))

    return InvariantPolynomial(algebra, k, evaluator, f"polarized:{k}")


def reznikov_pullback(k, order=32):
    """Integrated-Hamiltonian functional on su2, by quadrature on the sphere.

    An su2 element with basis coordinates a generates the rotation of
    the unit sphere about the axis a; its normalized (mean-zero)
    Hamiltonian is H(x) = <a, x>.  The functional is

        (xi_1,..,xi_k) -> int_{S^2} H_1 ... H_k  w

    with the area form w normalized to total mass 1.  Product
    Gauss-Legendre x uniform-angle quadrature; float only.
    """
    if order < 2:
        raise ValueError("quadrature order must be >= 2")
    algebra = lie_algebra("su2")
    z_nodes, z_weights = np.polynomial.legendre.leggauss(order)
    m_phi = 2 * order
    phi = 2.0 * np.pi * np.arange(m_phi) / m_phi
    st = np.sqrt(1.0 - z_nodes**2)
    X = np.outer(st, np.cos(phi))
    Y = np.outer(st, np.sin(phi))
    Z = np.repeat(z_nodes[:, None], m_phi, axis=1)
    W = np.repeat(z_weights[:, None] / (2.0 * m_phi), m_phi, axis=1)
    # total mass: sum W = 1 (Gauss weights sum to 2, angle average folded in)

    def evaluator(mats):
        vals = np.ones_like(X)
        for m in mats:
            a = algebra.decompose_float(m).real
            vals = vals * (a[0] * X + a[1] * Y + a[2] * Z)
        return float(np.sum(W * vals))

    return InvariantPolynomial(algebra, k, evaluator, f"reznikov:{k}")


def invariant_polynomial_from_selector(algebra, selector):
    """Parse selectors like chern:2, symtrace:3, reznikov:2:order=32."""
    parts = selector.split(":")
    kind = parts[0]
    if kind == "chern":
        return chern_polynomial(algebra, int(parts[1]))
    if kind == "symtrace":
        return sym_trace_poly(algebra, int(parts[1]))
    if kind == "reznikov":
        order = 32
        for p in parts[2:]:
            if p.startswith("order="):
                order = int(p[6:])
        return reznikov_pullback(int(parts[1]), order)
    raise ValueError(f"unknown invariant polynomial selector {selector!r}")


# ---------------------------------------------------------------------------
# sampled validity checks


def check_invariant_polynomial(rho, rng, samples=50, tol=1e-9, scale=1.0):
    """Sampled symmetry, multilinearity and Ad-invariance report."""
    alg = rho.algebra
    k = rho.arity
    worst = {"symmetry": 0.0, "multilinearity": 0.0, "ad_invariance": 0.0}
    perms = list(itertools.permutations(range(k)))
    if len(perms) > 6:
        perms = perms[:6]
    for _ in range(samples):
        args = [alg.element_matrix_float(alg.random_element(rng, scale)) for _ in range(k)]
        base = complex(rho.eval(args))
        ref = max(1.0, abs(base))
        for perm in perms:
            v = complex(rho.eval([args[i] for i in perm]))
            worst["symmetry"] = max(worst["symmetry"], abs(v - base) / ref)
        # linearity probe in slot 0
        s, t = rng.uniform(-1, 1), rng.uniform(-1, 1)
        extra = alg.element_matrix_float(alg.random_element(rng, scale))
        lhs = complex(rho.eval([s * args[0] + t * extra] + args[1:]))
        rhs = s * base + t * complex(rho.eval([extra] + args[1:]))
        worst["multilinearity"] = max(worst["multilinearity"], abs(lhs - rhs) / ref)
        g = expm(alg.element_matrix_float(alg.random_element(rng, scale)))
        gi = np.linalg.inv(g)
        conj = [g @ np.asarray(a) @ gi for a in args]
        v = complex(rho.eval(conj))
        worst["ad_invariance"] = max(worst["ad_invariance"], abs(v - base) / ref)
    worst["pass"] = all(v <= tol for key, v in worst.items() if key != "pass")
    return worst
