from fractions import Fraction

import pytest

from chernweil.poly import Poly, bernstein_basis
from chernweil.scalars import TAU, Scalar


def test_scalar_ring_laws():
    a = Scalar.of(1, 2, 1)
    b = Scalar.of(-3, 0, 0) + Scalar.of(0, 1, -1)
    c = Scalar.from_rational(2, 3)
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


def test_scalar_tau_arithmetic():
    t = Scalar.tau()
    assert t * t == Scalar.tau(2)
    assert (t / t) == Scalar.one()
    assert Scalar.one() / Scalar.of(0, 1, 1) == Scalar.of(0, -1, -1)
    assert Scalar.tau().to_complex() == TAU
    assert (Scalar.i() * Scalar.i()) == Scalar.from_rational(-1)


def test_scalar_rational_detection():
    assert Scalar.from_rational(5, 3).is_rational()
    assert Scalar.from_rational(5, 3).rational_value() == Fraction(5, 3)
    assert not Scalar.tau().is_rational()
    assert not Scalar.i().is_rational()
    with pytest.raises(ValueError):
        Scalar.tau().rational_value()


def test_scalar_float_promotion():
    a = Scalar.tau()
    f = Scalar.from_float(2.0)
    assert not (a * f).is_exact
    assert abs((a * f).to_complex() - 2 * TAU) < 1e-12


def test_scalar_division_restrictions():
    with pytest.raises(ValueError):
        (Scalar.one()) / (Scalar.one() + Scalar.tau())


def test_poly_arithmetic_and_diff():
    x1, x2 = Poly.var(2, 0), Poly.var(2, 1)
    p = (x1 + x2) * (x1 - x2)
    assert p == x1 * x1 - x2 * x2
    assert p.diff(0) == x1.scale(2)
    assert p.diff(1) == x2.scale(-2)
    assert (p - p).is_zero()


def test_poly_compose_and_eval():
    x1, x2 = Poly.var(2, 0), Poly.var(2, 1)
    p = x1 * x2 + Poly.const(2, 3)
    t = Poly.var(1, 0)
    q = p.compose([t, t * t])
    assert q == t ** 3 + Poly.const(1, 3)
    assert q.eval([Fraction(1, 2)]) == Scalar.from_rational(25, 8)
    assert abs(q.eval_complex([0.5]) - 3.125) < 1e-12


def test_poly_compose_into_point():
    p = Poly.const(0, 7)
    q = p.compose([], source_dim=2)
    assert q.dim == 2 and q == Poly.const(2, 7)


def test_bernstein_partition_of_unity():
    for dim, deg in [(1, 2), (2, 3)]:
        basis = bernstein_basis(dim, deg)
        total = Poly.zero(dim)
        for b in basis.values():
            total = total + b
        assert total == Poly.const(dim, 1)


def test_poly_eval_scalar_points():
    p = Poly(1, {(2,): Scalar.tau()})
    v = p.eval([Fraction(1, 2)])
    assert v == Scalar.tau() * Fraction(1, 4)
