import random
from fractions import Fraction

import pytest
import sympy

from chernweil.forms import (
    AffineMap,
    BernsteinMap,
    DegreeMismatchError,
    FaceConsistencyError,
    PolyForm,
    SimplicialForm,
    bubble,
    check_prescription_consistency,
    check_simplicial_form,
    induced_form_on_standard_simplex,
    integrate_to_cochain,
    random_poly,
    random_polyform,
    random_simplicial_form,
    whitney_extend,
)
from chernweil.poly import Poly
from chernweil.scalars import Scalar
from chernweil.simplicial import (
    SimplexId,
    boundary_sphere,
    coboundary,
    fundamental_cycle_two_disk,
    pairing,
    standard_simplex,
    two_disk_sphere,
)
from oracles import integrate_form_oracle


def test_d_coordinate_example():
    f = PolyForm(2, 1, {(1,): Poly.var(2, 0)})  # x1 dx2
    assert f.d() == PolyForm(2, 2, {(0, 1): Poly.const(2, 1)})


def test_d_of_constant():
    assert PolyForm(2, 0, {(): Poly.const(2, 5)}).d().is_zero()


def test_d_squared_random():
    rng = random.Random(0)
    for _ in range(100):
        dim = rng.choice([2, 3, 4])
        k = rng.randrange(0, dim)
        f = random_polyform(rng, dim, k, 4)
        assert f.d().d().is_zero()


def test_wedge_basics():
    dx1, dx2 = PolyForm.dx(2, 0), PolyForm.dx(2, 1)
    assert dx1.wedge(dx1).is_zero()
    assert dx1.wedge(dx2) == PolyForm(2, 2, {(0, 1): Poly.const(2, 1)})
    assert dx1.wedge(dx2) == (dx2.wedge(dx1)).scale(Fraction(-1))


def test_leibniz_random():
    rng = random.Random(1)
    for _ in range(100):
        dim = rng.choice([2, 3])
        p = rng.randrange(0, dim)
        q = rng.randrange(0, dim - p + 1)
        a = random_polyform(rng, dim, p, 2)
        b = random_polyform(rng, dim, q, 2)
        lhs = a.wedge(b).d()
        rhs = a.d().wedge(b) + a.wedge(b.d()).scale(Fraction((-1) ** p))
        assert lhs == rhs


def test_graded_commutativity_random():
    rng = random.Random(2)
    for _ in range(100):
        dim = rng.choice([2, 3])
        p = rng.randrange(0, dim + 1)
        q = rng.randrange(0, dim - p + 1)
        a = random_polyform(rng, dim, p, 2)
        b = random_polyform(rng, dim, q, 2)
        assert a.wedge(b) == b.wedge(a).scale(Fraction((-1) ** (p * q)))


def test_pullback_face_against_sympy():
    # pull dx1 + x1 x2 dx2 on Delta^2 back along each face, vs sympy chain rule
    t = sympy.symbols("t")
    x1, x2 = sympy.symbols("x1 x2")
    comp = [sympy.Integer(1), x1 * x2]
    form = PolyForm(2, 1, {(0,): Poly.const(2, 1), (1,): Poly.var(2, 0) * Poly.var(2, 1)})
    face_exprs = {0: [1 - t, t], 1: [sympy.Integer(0), t], 2: [t, sympy.Integer(0)]}
    for i, coords in face_exprs.items():
        pulled = form.pullback(AffineMap.face(2, i))
        want = sympy.expand(
            comp[0].subs({x1: coords[0], x2: coords[1]}) * sympy.diff(coords[0], t)
            + comp[1].subs({x1: coords[0], x2: coords[1]}) * sympy.diff(coords[1], t)
        )
        got = pulled.component((0,))
        got_sym = sympy.expand(
            sum(
                sympy.Rational(str(c.rational_value())) * t ** e[0]
                for e, c in got.terms.items()
            )
        )
        assert sympy.simplify(got_sym - want) == 0, (i, got_sym, want)


def test_pullback_identity_and_commutes_with_d():
    rng = random.Random(3)
    ident = AffineMap.identity(3)
    for _ in range(100):
        k = rng.randrange(0, 3)
        f = random_polyform(rng, 3, k, 2)
        assert f.pullback(ident) == f
        phi = BernsteinMap.random(rng, 2, 3, 2)
        assert f.pullback(phi).d() == f.d().pullback(phi)


def test_pullback_contravariant_functorial():
    rng = random.Random(4)
    for _ in range(20):
        phi = BernsteinMap.random(rng, 2, 3, 2)
        psi = BernsteinMap.random(rng, 1, 2, 2)
        comp_coords = [c.compose(psi.coords(), source_dim=1) for c in phi.coords()]

        class Comp:
            source_dim, target_dim = 1, 3

            def coords(self):
                return comp_coords

        omega = random_polyform(rng, 3, rng.choice([0, 1]), 2)
        assert omega.pullback(Comp()) == omega.pullback(phi).pullback(psi)


def test_integrate_top_values():
    one_d1 = PolyForm(1, 1, {(0,): Poly.const(1, 1)})
    assert one_d1.integrate_top() == Scalar.one()
    vol2 = PolyForm(2, 2, {(0, 1): Poly.const(2, 1)})
    assert vol2.integrate_top() == Scalar.from_rational(1, 2)
    x1v = PolyForm(2, 2, {(0, 1): Poly.var(2, 0)})
    assert x1v.integrate_top() == Scalar.from_rational(1, 6)


def test_integrate_top_against_quadrature():
    rng = random.Random(5)
    for _ in range(100):
        dim = rng.choice([1, 2, 3])
        f = random_polyform(rng, dim, dim, 3)
        exact = f.integrate_top().to_complex()
        quad = integrate_form_oracle(f, order=8)
        assert abs(exact - quad) <= 1e-9 * max(1.0, abs(exact))


def test_integrate_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        PolyForm(2, 1, {(0,): Poly.const(2, 1)}).integrate_top()


def test_bernstein_validity_and_containment():
    rng = random.Random(6)
    import numpy as np

    npr = np.random.default_rng(6)
    for _ in range(5):
        phi = BernsteinMap.random(rng, 2, 3, 3)
        assert phi.is_valid()
        coords = phi.coords()
        for _ in range(200):
            w = npr.dirichlet(np.ones(3))
            pt = [w[1], w[2]]
            vals = [c.eval_complex(pt).real for c in coords]
            assert all(v >= -1e-12 for v in vals)
            assert sum(vals) <= 1 + 1e-12


def test_induced_form_passes_check():
    X = standard_simplex(2)
    rng = random.Random(7)
    glob = random_polyform(rng, 2, 1, 2)
    om = induced_form_on_standard_simplex(X, glob)
    assert check_simplicial_form(om) == []


def test_induced_form_coherence_under_polynomial_maps():
    # coherence: pullbacks along arbitrary polynomial simplices are
    # themselves compatible (sampled through composition equality)
    X = standard_simplex(2)
    rng = random.Random(8)
    glob = random_polyform(rng, 2, 1, 2)
    for _ in range(10):
        sigma = BernsteinMap.random(rng, 1, 2, 2)
        tau = BernsteinMap.random(rng, 1, 1, 2)
        comp_coords = [c.compose(tau.coords(), source_dim=1) for c in sigma.coords()]

        class Comp:
            source_dim, target_dim = 1, 2

            def coords(self):
                return comp_coords

        assert glob.pullback(Comp()) == glob.pullback(sigma).pullback(tau)


def test_perturbed_form_fails_check():
    X = two_disk_sphere()
    rng = random.Random(9)
    om = random_simplicial_form(X, 1, rng, 1)
    bad = dict(om.forms)
    sid = SimplexId(2, 1)
    bad[sid] = bad[sid] + PolyForm(2, 1, {(0,): Poly.const(2, 1)})
    violations = check_simplicial_form(SimplicialForm(X, 1, bad))
    assert violations and all(s == sid for s, _ in violations)


def test_zero_form_passes():
    X = two_disk_sphere()
    assert check_simplicial_form(SimplicialForm.zero(X, 1)) == []


def test_global_ops():
    X = boundary_sphere(2)
    rng = random.Random(10)
    for _ in range(50):
        k = rng.randrange(0, 2)
        om = random_simplicial_form(X, k, rng, 1)
        assert check_simplicial_form(om) == []
        assert check_simplicial_form(om.d()) == []
        other = random_simplicial_form(X, rng.randrange(0, 2 - k + 1), rng, 1)
        assert check_simplicial_form(om.wedge(other)) == []
        assert om.d().d() == SimplicialForm.zero(X, k + 2)


def test_global_pullback_identity(tds):
    from chernweil.simplicial import SimplicialMap

    rng = random.Random(11)
    om = random_simplicial_form(tds, 1, rng, 1)
    assert om.pullback(SimplicialMap.identity(tds)) == om


def test_integrate_to_cochain_point_evaluations():
    X = boundary_sphere(2)
    rng = random.Random(12)
    om = random_simplicial_form(X, 0, rng, 1)
    c = integrate_to_cochain(om)
    for sid in X.cells(0):
        assert c.value(sid) == om.form(sid).component(()).eval([])


def test_integration_commutes_with_d():
    rng = random.Random(13)
    for X in [boundary_sphere(2), two_disk_sphere()]:
        for _ in range(25):
            k = rng.randrange(0, 3)
            om = random_simplicial_form(X, k, rng, 1)
            lhs = integrate_to_cochain(om.d())
            rhs = coboundary(X, integrate_to_cochain(om))
            assert (lhs - rhs).is_zero()


def test_exact_form_pairs_to_zero_on_cycle():
    X = two_disk_sphere()
    rng = random.Random(14)
    eta = random_simplicial_form(X, 1, rng, 2)
    om = eta.d()
    c = integrate_to_cochain(om)
    assert pairing(c, fundamental_cycle_two_disk(X)).is_zero()


def test_whitney_zero_and_constant():
    zero_pres = {i: PolyForm.zero(1, 0) for i in range(3)}
    ext = whitney_extend(2, 0, zero_pres)
    for i in range(3):
        assert ext.pullback(AffineMap.face(2, i)).is_zero()
    const_pres = {i: PolyForm(1, 0, {(): Poly.const(1, 7)}) for i in range(3)}
    ext = whitney_extend(2, 0, const_pres)
    for i in range(3):
        assert ext.pullback(AffineMap.face(2, i)) == const_pres[i]


def test_whitney_random_edge_data_on_triangle():
    rng = random.Random(15)
    for _ in range(20):
        # 1-forms on the three edges of a triangle: no corner constraints
        pres = {i: random_polyform(rng, 1, 1, 2) for i in range(3)}
        assert check_prescription_consistency(2, pres) == []
        ext = whitney_extend(2, 1, pres)
        for i in range(3):
            assert ext.pullback(AffineMap.face(2, i)) == pres[i]


def test_whitney_inconsistent_data_raises():
    # 0-forms with mismatched corner values cannot extend
    pres = {
        0: PolyForm(1, 0, {(): Poly.const(1, 1)}),
        1: PolyForm(1, 0, {(): Poly.const(1, 2)}),
        2: PolyForm(1, 0, {(): Poly.const(1, 3)}),
    }
    with pytest.raises(FaceConsistencyError):
        whitney_extend(2, 0, pres)


def test_whitney_compatible_function_data():
    # random compatible 0-form data on the boundary of a triangle,
    # generated from a global polynomial
    rng = random.Random(16)
    for _ in range(10):
        glob = random_poly(rng, 2, 2)
        pres = {
            i: PolyForm(1, 0, {(): glob.compose(AffineMap.face(2, i).coords(), source_dim=1)})
            for i in range(3)
        }
        ext = whitney_extend(2, 0, pres)
        for i in range(3):
            assert ext.pullback(AffineMap.face(2, i)) == pres[i]


def test_bubble_vanishes_on_facets():
    for d in [1, 2, 3]:
        b = bubble(d)
        for i in range(d + 1):
            assert b.compose(AffineMap.face(d, i).coords(), source_dim=d - 1).is_zero()


def test_serialization_is_canonical_equality():
    from chernweil.io import polyform_to_str

    rng = random.Random(17)
    for _ in range(20):
        f = random_polyform(rng, 3, 2, 2)
        g = PolyForm(3, 2, dict(reversed(list(f.comps.items()))))
        assert polyform_to_str(f) == polyform_to_str(g)
