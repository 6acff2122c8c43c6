"""Multivariate polynomials on the coordinate simplex.

A Poly lives on Delta^d, embedded in R^d with coordinates x_1..x_d
(indices 0-based internally).  Coefficients are Scalars, so arithmetic
is exact in exact mode.  Terms are kept in a dict keyed by exponent
tuples; zero coefficients are pruned eagerly so equality is structural.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar


def _monomial_key(exps):
    # graded lexicographic, used for canonical ordering in serialization
    return (sum(exps), exps)


class Poly:
    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms=None):
        self.dim = dim
        t = {}
        if terms:
            for e, c in terms.items():
                c = Scalar.coerce(c)
                if not c.is_zero():
                    t[tuple(e)] = c
        self.terms = t

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(dim):
        return Poly(dim)

    @staticmethod
    def const(dim, c):
        return Poly(dim, {(0,) * dim: Scalar.coerce(c)})

    @staticmethod
    def var(dim, i):
        """The coordinate x_{i+1} on Delta^dim (0-based index i)."""
        e = [0] * dim
        e[i] = 1
        return Poly(dim, {tuple(e): Scalar.one()})

    # -- predicates / info ---------------------------------------------

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    # -- ring operations -------------------------------------------------

    def _binop_add(self, other, sign):
        if self.dim != other.dim:
            raise ValueError("polynomial dimension mismatch")
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Scalar.zero()) + (c if sign > 0 else -c)
            if s.is_zero():
                t.pop(e, None)
            else:
                t[e] = s
        return Poly(self.dim, t)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.dim, other)
        return self._binop_add(other, +1)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.dim, other)
        return self._binop_add(other, -1)

    def __neg__(self):
        return Poly(self.dim, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.dim != other.dim:
            raise ValueError("polynomial dimension mismatch")
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, Scalar.zero()) + c1 * c2
                if s.is_zero():
                    t.pop(e, None)
                else:
                    t[e] = s
        return Poly(self.dim, t)

    __rmul__ = __mul__

    def scale(self, c):
        c = Scalar.coerce(c)
        if c.is_zero():
            return Poly.zero(self.dim)
        return Poly(self.dim, {e: cc * c for e, cc in self.terms.items()})

    def __pow__(self, n):
        out = Poly.const(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------

    def diff(self, i):
        """Partial derivative with respect to x_{i+1}."""
        t = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            t[tuple(e2)] = c * e[i]
        return Poly(self.dim, t)

    def compose(self, polys, source_dim=None):
        """Substitute polys[i] for x_{i+1}; all polys share one source dim.

        source_dim disambiguates the (constant) result when polys is
        empty, i.e. when composing with a map out of Delta^0.
        """
        if len(polys) != self.dim:
            raise ValueError("need one substitution polynomial per variable")
        if polys:
            src = polys[0].dim
        elif source_dim is not None:
            src = source_dim
        else:
            src = 0
        out = Poly.zero(src)
        for e, c in self.terms.items():
            term = Poly.const(src, c)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term * polys[i]
            out = out + term
        return out

    def eval(self, point):
        """Evaluate at a point given as numbers, Fractions or Scalars."""
        out = Scalar.zero()
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v = v * Scalar.coerce(point[i]) ** k
            out = out + v
        return out

    def eval_complex(self, point, tau=None):
        from .scalars import TAU

        t = TAU if tau is None else tau
        out = 0j
        for e, c in self.terms.items():
            v = c.to_complex(t)
            for i, k in enumerate(e):
                if k:
                    v *= complex(point[i]) ** k
            out += v
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: _monomial_key(ec[0]))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i+1}" + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e)
                if k
            )
            bits.append(f"{c!r}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(bits) + ")"


def bernstein_basis(dim, degree):
    """All Bernstein polynomials of the given degree on Delta^dim.

    Returns a dict multi-index -> Poly, where a multi-index alpha has
    dim+1 entries summing to degree (the first entry belongs to the
    barycentric coordinate 1 - sum x_i).
    """
    from math import factorial

    lam0 = Poly.const(dim, 1)
    for i in range(dim):
        lam0 = lam0 - Poly.var(dim, i)
    lams = [lam0] + [Poly.var(dim, i) for i in range(dim)]

    out = {}
    for alpha in _compositions(degree, dim + 1):
        coef = factorial(degree)
        for a in alpha:
            coef //= factorial(a)
        p = Poly.const(dim, coef)
        for lam, a in zip(lams, alpha):
            for _ in range(a):
                p = p * lam
        out[alpha] = p
    return out


def _compositions(n, parts):
    if parts == 1:
        yield (n,)
        return
    for head in range(n + 1):
        for rest in _compositions(n - head, parts - 1):
            yield (head,) + rest
