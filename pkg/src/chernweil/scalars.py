"""Exact scalar arithmetic with the circle constant kept symbolic.

A Scalar is a Laurent polynomial in one formal symbol ``tau`` (standing
for 2*pi) whose coefficients are Gaussian rationals a + b*i.  This is
enough to carry the i/(2*pi) normalizations of Chern classes through
every computation without rounding, so integrality statements can be
tested with ``==``.

A Scalar may instead hold a float (complex) payload; any arithmetic that
mixes exact and float operands promotes the result to float by
substituting tau = 2*pi.
"""

from __future__ import annotations

import math
from fractions import Fraction

TAU = 2.0 * math.pi


class QI:
    """Gaussian rational: re + im*i with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        return QI(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return QI(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __mul__(self, other):
        return QI(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return QI(self.re / n, -self.im / n)

    def __eq__(self, other):
        return isinstance(other, QI) and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def to_complex(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        return f"QI({self.re}, {self.im})"


class Scalar:
    """Exact tau-Laurent scalar, or a complex float in float mode."""

    __slots__ = ("terms", "fval")

    def __init__(self, terms=None, fval=None):
        # terms: dict tau-exponent -> QI (exact mode);  fval: complex (float mode)
        if fval is not None:
            self.terms = None
            self.fval = complex(fval)
        else:
            t = {}
            if terms:
                for k, c in terms.items():
                    if not c.is_zero():
                        t[k] = c
            self.terms = t
            self.fval = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero():
        return Scalar({})

    @staticmethod
    def one():
        return Scalar({0: QI(1)})

    @staticmethod
    def of(re=0, im=0, tau_power=0):
        return Scalar({tau_power: QI(Fraction(re), Fraction(im))})

    @staticmethod
    def from_rational(p, q=1):
        return Scalar({0: QI(Fraction(p, q))})

    @staticmethod
    def i():
        return Scalar({0: QI(0, 1)})

    @staticmethod
    def tau(power=1):
        return Scalar({power: QI(1)})

    @staticmethod
    def from_float(z):
        return Scalar(fval=complex(z))

    @staticmethod
    def coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar({0: QI(Fraction(x))})
        if isinstance(x, (float, complex)):
            return Scalar(fval=complex(x))
        raise TypeError(f"cannot coerce {type(x)} to Scalar")

    # -- predicates ----------------------------------------------------

    @property
    def is_exact(self):
        return self.fval is None

    def is_zero(self):
        if self.is_exact:
            return not self.terms
        return self.fval == 0

    def is_rational(self):
        """True when exact, tau-free and real."""
        if not self.is_exact:
            return False
        return all(k == 0 and c.im == 0 for k, c in self.terms.items())

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"not a rational scalar: {self!r}")
        return self.terms.get(0, QI()).re

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = Scalar.coerce(other)
        if self.is_exact and other.is_exact:
            t = dict(self.terms)
            for k, c in other.terms.items():
                s = t.get(k, QI()) + c
                if s.is_zero():
                    t.pop(k, None)
                else:
                    t[k] = s
            return Scalar(t)
        return Scalar(fval=self.to_complex() + other.to_complex())

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) + (-self)

    def __neg__(self):
        if self.is_exact:
            return Scalar({k: -c for k, c in self.terms.items()})
        return Scalar(fval=-self.fval)

    def __mul__(self, other):
        other = Scalar.coerce(other)
        if self.is_exact and other.is_exact:
            t = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    k = k1 + k2
                    s = t.get(k, QI()) + c1 * c2
                    if s.is_zero():
                        t.pop(k, None)
                    else:
                        t[k] = s
            return Scalar(t)
        return Scalar(fval=self.to_complex() * other.to_complex())

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar.coerce(other)
        if not self.is_exact or not other.is_exact:
            return Scalar(fval=self.to_complex() / other.to_complex())
        if len(other.terms) != 1:
            raise ValueError("exact division only by tau-monomials")
        (k, c), = other.terms.items()
        inv = c.inverse()
        return Scalar({j - k: cj * inv for j, cj in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers not supported; divide instead")
        out = Scalar.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_exact and other.is_exact:
            return self.terms == other.terms
        return self.to_complex() == other.to_complex()

    def __hash__(self):
        if not self.is_exact:
            return hash(self.fval)
        return hash(frozenset(self.terms.items()))

    # -- conversion ----------------------------------------------------

    def to_complex(self, tau=TAU):
        if not self.is_exact:
            return self.fval
        return sum((c.to_complex() * tau**k for k, c in self.terms.items()), 0j)

    def abs_float(self):
        return abs(self.to_complex())

    def __repr__(self):
        if not self.is_exact:
            return f"Scalar(~{self.fval})"
        if not self.terms:
            return "Scalar(0)"
        bits = []
        for k in sorted(self.terms):
            c = self.terms[k]
            s = f"{c.re}" if c.im == 0 else (f"{c.im}i" if c.re == 0 else f"({c.re}+{c.im}i)")
            if k:
                s += f"*tau^{k}"
            bits.append(s)
        return "Scalar(" + " + ".join(bits) + ")"


ZERO = Scalar.zero()
ONE = Scalar.one()
I = Scalar.i()
