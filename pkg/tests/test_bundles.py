import random
from fractions import Fraction

import numpy as np
import pytest

from chernweil.bundles import (
    BundleError,
    LieValuedPoly,
    TransitionMap,
    apply_gauge,
    clutch_bundle,
    clutch_winding,
    concordance,
    construct_connection,
    gauge_prescription,
    horn_fill_bundle,
    pullback_bundle,
    random_connection,
    random_u1_bundle,
    restrict_bundle_to_horn,
    transition_of_morphism,
    transitions_equal,
    trivial_bundle,
    validate_bundle,
    validate_connection,
)
from chernweil.forms import AffineMap
from chernweil.liealg import lie_algebra
from chernweil.poly import Poly
from chernweil.scalars import Scalar
from chernweil.simplicial import (
    SimplexId,
    SimplicialMap,
    boundary_sphere,
    horn,
    standard_simplex,
    two_disk_sphere,
)
from oracles import winding_of_samples

V = SimplexId


def test_trivial_bundle_validates():
    for name in ["u1", "su2"]:
        P = trivial_bundle(boundary_sphere(2), lie_algebra(name))
        rep = validate_bundle(P)
        assert rep.ok


def test_clutch_validates_and_connection_compatible():
    for n in [-2, 0, 1, 3]:
        P, D = clutch_bundle(n)
        assert validate_bundle(P).ok
        rep = validate_connection(P, D)
        assert rep.ok and rep.exact


def test_perturbed_transition_located():
    rng = random.Random(0)
    P = random_u1_bundle(two_disk_sphere(), rng)
    assert validate_bundle(P).ok
    bad = P.copy()
    key = (V(2, 0), 1)
    tw = LieValuedPoly(P.algebra, 1, [Poly(1, {(1,): Scalar.from_rational(1, 3)})])
    bad.transitions[key] = TransitionMap.single(tw).compose(bad.transitions[key])
    rep = validate_bundle(bad)
    assert not rep.ok
    assert any("N" in f for f in rep.failures)


def test_winding_oracle_range():
    for n in range(-5, 6):
        P, _ = clutch_bundle(n)
        assert clutch_winding(P) == Scalar.from_rational(n)


def test_winding_against_sampled_loop():
    # sample the S/N comparison map around the equator and count the
    # winding numerically, independent of the log bookkeeping
    n = 3
    P, _ = clutch_bundle(n)
    N, S = V(2, 0), V(2, 1)
    samples = []
    ts = np.linspace(0.0, 1.0, 400, endpoint=False)
    # the equator loop traverses face 2 (e01), face 0 (e12), then face 1
    # (e02) reversed; orientation signs follow the boundary of N
    for i, reverse in [(2, False), (0, False), (1, True)]:
        gN = [P.transitions[(N, i)].evaluate([t])[0][0] for t in ts]
        gS = [P.transitions[(S, i)].evaluate([t])[0][0] for t in ts]
        vals = [s / nn for s, nn in zip(gS, gN)]
        samples.extend(reversed(vals) if reverse else vals)
    w = winding_of_samples(samples)
    assert abs(w - n) < 1e-6


def test_clutch_zero_trivializable():
    P, D = clutch_bundle(0)
    assert all(t.is_identity() for t in P.transitions.values())
    assert clutch_winding(P) == Scalar.zero()


def test_pullback_identity(tds):
    P = random_u1_bundle(tds, random.Random(1))
    assert pullback_bundle(SimplicialMap.identity(tds), P).data_equal(P)


def test_pullback_of_trivial_is_trivial(inclusion_of_north, tds):
    u1 = lie_algebra("u1")
    P = trivial_bundle(tds, u1)
    assert pullback_bundle(inclusion_of_north, P).data_equal(
        trivial_bundle(standard_simplex(2), u1)
    )


def test_pullback_composition_data_equality(inclusion_of_north):
    # maps Delta^1 -> Delta^2 -> two_disk_sphere (a random pair of maps
    # between the triangle and the sphere's cells)
    tds = inclusion_of_north.target
    d1, d2 = standard_simplex(1), standard_simplex(2)
    P = random_u1_bundle(tds, random.Random(2))
    for f_assign in [
        {V(0, 0): (V(0, 1), ()), V(0, 1): (V(0, 2), ()), V(1, 0): (V(1, 2), ())},
        {V(0, 0): (V(0, 0), ()), V(0, 1): (V(0, 1), ()), V(1, 0): (V(1, 0), ())},
        {V(0, 0): (V(0, 0), ()), V(0, 1): (V(0, 0), ()), V(1, 0): (V(0, 0), (0,))},
    ]:
        f = SimplicialMap(d1, d2, f_assign)
        assert f.validate() == []
        lhs = pullback_bundle(inclusion_of_north.compose(f), P)
        rhs = pullback_bundle(f, pullback_bundle(inclusion_of_north, P))
        assert lhs.data_equal(rhs)


def test_pullback_through_degeneracy(collapse_map):
    d1 = standard_simplex(1)
    P = random_u1_bundle(d1, random.Random(3), windings=False)
    pulled = pullback_bundle(collapse_map, P)
    assert validate_bundle(pulled).ok


def test_construct_connection_zero_for_trivial():
    X = boundary_sphere(2)
    P = trivial_bundle(X, lie_algebra("su2"))
    D = construct_connection(P)
    assert all(f.is_zero() for f in D.forms.values())
    assert validate_connection(P, D).ok


def test_construct_connection_clutch_exact():
    for n in [1, 2, -3]:
        P, _ = clutch_bundle(n)
        D = construct_connection(P)
        rep = validate_connection(P, D)
        assert rep.ok and rep.exact


def test_random_connections_valid():
    P, _ = clutch_bundle(1)
    for seed in range(5):
        D = random_connection(P, seed)
        rep = validate_connection(P, D)
        assert rep.ok and rep.exact
    Ps = trivial_bundle(boundary_sphere(2), lie_algebra("su2"))
    for seed in range(3):
        assert validate_connection(Ps, random_connection(Ps, seed)).ok


def test_gauge_prescription_inverts_rule():
    # delta_i^* A recovered from the face data reproduces the connection
    P, D = clutch_bundle(2)
    X = P.base
    for sid in X.cells(2):
        for i in range(3):
            want = gauge_prescription(P, D.forms, sid, i)
            actual = D.forms[sid].pullback(AffineMap.face(2, i))
            assert want == actual


def test_concordance_same_connection():
    P, D = clutch_bundle(1)
    conc = concordance(P, D, D)
    for s in P.base.all_cells():
        assert conc.restrict(conc.end0)[s] == D.forms[s]
        assert conc.restrict(conc.end1)[s] == D.forms[s]


def test_concordance_random_pair():
    P, D0 = clutch_bundle(1)
    D1 = random_connection(P, 11)
    assert any(D0.forms[s] != D1.forms[s] for s in P.base.all_cells())
    conc = concordance(P, D0, D1)
    assert all(conc.restrict(conc.end0)[s] == D0.forms[s] for s in P.base.all_cells())
    assert all(conc.restrict(conc.end1)[s] == D1.forms[s] for s in P.base.all_cells())
    rep = validate_connection(conc.bundle, conc.connection)
    assert rep.ok and rep.exact


def test_concordance_su2():
    Ps = trivial_bundle(boundary_sphere(2), lie_algebra("su2"))
    Da, Db = random_connection(Ps, 1), random_connection(Ps, 2)
    conc = concordance(Ps, Da, Db)
    rep = validate_connection(conc.bundle, conc.connection)
    assert rep.ok and rep.exact


@pytest.mark.parametrize("n,k", [(2, 0), (2, 1), (2, 2), (3, 0), (3, 2)])
def test_horn_fill_random(n, k):
    H = horn(n, k)
    P = random_u1_bundle(H.space, random.Random(37 + 10 * n + k))
    assert validate_bundle(P).ok
    filled, cmap = horn_fill_bundle(H, P)
    assert validate_bundle(filled).ok
    back = restrict_bundle_to_horn(filled, H, cmap)
    assert back.transitions == P.transitions
    filled2, _ = horn_fill_bundle(H, back)
    back2 = restrict_bundle_to_horn(filled2, H, cmap)
    assert back2.transitions == back.transitions


def test_horn_fill_trivial_gives_trivial():
    H = horn(2, 1)
    P = trivial_bundle(H.space, lie_algebra("u1"))
    filled, cmap = horn_fill_bundle(H, P)
    assert all(t.is_identity() for t in filled.transitions.values())


def test_horn_fill_rejects_nonabelian():
    H = horn(2, 1)
    P = trivial_bundle(H.space, lie_algebra("su2"))
    with pytest.raises(BundleError):
        horn_fill_bundle(H, P)


def test_curvature_gauge_covariance():
    # F_face = Ad_{phi^{-1}}(delta_i^* F) at sampled points
    from chernweil.cw import curvature

    su2 = lie_algebra("su2")
    bs = boundary_sphere(2)
    P0 = trivial_bundle(bs, su2)
    D0 = random_connection(P0, 5)
    rng = random.Random(6)
    gauges = {
        s: LieValuedPoly(su2, s.dim, [Poly.const(s.dim, Scalar.from_rational(rng.randrange(-3, 4), 8)) for _ in range(3)])
        for s in bs.all_cells()
    }
    P, D = apply_gauge(P0, gauges, D0)
    F = curvature(D)
    npr = np.random.default_rng(7)
    worst = 0.0
    count = 0
    for sid in bs.cells(2):
        for i in range(3):
            phi = P.transitions[(sid, i)]
            tgt, word = bs.face(sid, i)
            assert not word
            pulledF = F[sid].pullback(AffineMap.face(2, i))
            for _ in range(12):
                w = npr.dirichlet(np.ones(2))
                pt = [w[1]]
                g = phi.evaluate(pt)
                gi = np.linalg.inv(g)
                lhs = F[tgt].eval_matrix_coeffs(pt)
                rhs = pulledF.eval_matrix_coeffs(pt)
                for I in set(lhs) | set(rhs):
                    z = np.zeros((2, 2), dtype=complex)
                    diff = np.abs(lhs.get(I, z) - gi @ rhs.get(I, z) @ g).max()
                    worst = max(worst, float(diff))
                count += 1
    assert count >= 100
    assert worst < 1e-9


def test_transition_of_morphism_identity():
    P, _ = clutch_bundle(1)
    t = transition_of_morphism(P, (0, 1, 2), V(2, 0))
    assert t.is_identity()


def test_transitions_evaluate_into_group():
    rng = random.Random(50)
    P = random_u1_bundle(two_disk_sphere(), rng)
    npr = np.random.default_rng(51)
    for (sid, i), t in P.transitions.items():
        for _ in range(5):
            w = npr.dirichlet(np.ones(t.dim + 1)) if t.dim else [1.0]
            pt = list(w[1:]) if t.dim else []
            g = t.evaluate(pt)
            assert abs(abs(g[0][0]) - 1.0) < 1e-10


def test_pullback_base_mismatch_rejected(inclusion_of_north):
    P = trivial_bundle(standard_simplex(3), lie_algebra("u1"))
    with pytest.raises(BundleError):
        pullback_bundle(inclusion_of_north, P)


def test_construct_connection_propagates_simplex_on_bad_data():
    from chernweil.forms import FaceConsistencyError

    # inconsistent facet prescriptions need a 3-cell: twist one face of
    # the tetrahedron so the 1-form prescriptions disagree on an edge
    X = standard_simplex(3)
    bad = trivial_bundle(X, lie_algebra("u1"))
    top = V(3, 0)
    tw = LieValuedPoly(bad.algebra, 2, [Poly(2, {(2, 0): Scalar.tau()})])
    bad.transitions[(top, 0)] = TransitionMap.single(tw)
    with pytest.raises(FaceConsistencyError) as e:
        construct_connection(bad)
    assert "0123" in str(e.value)  # the offending simplex is named


def test_transitions_equal_mod_tau():
    u1 = lie_algebra("u1")
    p = LieValuedPoly(u1, 1, [Poly(1, {(1,): Scalar.from_rational(1, 2)})])
    q = LieValuedPoly(u1, 1, [Poly(1, {(1,): Scalar.from_rational(1, 2)}) + Poly.const(1, Scalar.tau())])
    assert transitions_equal(TransitionMap.single(p), TransitionMap.single(q))
    r = LieValuedPoly(u1, 1, [Poly(1, {(1,): Scalar.from_rational(1, 2)}) + Poly.const(1, Scalar.tau() * Fraction(1, 2))])
    assert not transitions_equal(TransitionMap.single(p), TransitionMap.single(r))
