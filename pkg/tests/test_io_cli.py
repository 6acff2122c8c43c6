import random
from fractions import Fraction

import pytest

from chernweil import io as cio
from chernweil.bundles import LieValuedPoly, apply_gauge, clutch_bundle, trivial_bundle
from chernweil.cli import main
from chernweil.forms import random_poly, random_polyform
from chernweil.liealg import lie_algebra
from chernweil.poly import Poly
from chernweil.scalars import Scalar
from chernweil.simplicial import (
    boundary_sphere,
    horn,
    product_with_interval,
    standard_simplex,
    two_disk_sphere,
)


def test_scalar_round_trip():
    cases = [
        Scalar.zero(),
        Scalar.one(),
        Scalar.of(-3, 2, 1),
        Scalar.of(1, 0, -2) + Scalar.of(0, Fraction(1, 3)),
        Scalar.from_rational(-7, 3),
        Scalar.i(),
        Scalar.from_float(1.5 - 0.25j),
    ]
    for s in cases:
        text = cio.scalar_to_str(s)
        assert cio.parse_scalar(text) == s
        assert cio.scalar_to_str(cio.parse_scalar(text)) == text


def test_poly_round_trip():
    rng = random.Random(0)
    for _ in range(50):
        p = random_poly(rng, 3, 3) + Poly.const(3, Scalar.of(1, 2, 1))
        text = cio.poly_to_str(p)
        assert cio.parse_poly(text, 3) == p


def test_polyform_round_trip():
    rng = random.Random(1)
    for _ in range(20):
        f = random_polyform(rng, 3, 2, 2)
        text = cio.polyform_to_str(f)
        assert cio.parse_polyform(text) == f


def test_space_round_trips():
    spaces = [
        standard_simplex(3),
        boundary_sphere(2),
        two_disk_sphere(),
        product_with_interval(two_disk_sphere())[0],
        horn(3, 0).space,
    ]
    for X in spaces:
        text = cio.simplicial_set_to_str(X)
        X2 = cio.parse_simplicial_set(text)
        assert X2 == X and X2.names == X.names
        assert cio.simplicial_set_to_str(X2) == text


def test_bundle_connection_round_trips():
    tds = two_disk_sphere()
    P, D = clutch_bundle(3)
    bt = cio.bundle_to_str(P)
    P2 = cio.parse_bundle(bt, tds)
    assert P2.transitions == P.transitions
    assert cio.bundle_to_str(P2) == bt
    ct = cio.connection_to_str(D)
    D2 = cio.parse_connection(ct, P2)
    assert all(D2.forms[s] == D.forms[s] for s in tds.all_cells())
    assert cio.connection_to_str(D2) == ct


def test_multifactor_bundle_round_trip():
    bs = boundary_sphere(2)
    su2 = lie_algebra("su2")
    rng = random.Random(2)
    gauges = {
        s: LieValuedPoly(su2, s.dim, [random_poly(rng, s.dim, 1) for _ in range(3)])
        for s in bs.all_cells()
    }
    P, _ = apply_gauge(trivial_bundle(bs, su2), gauges)
    text = cio.bundle_to_str(P)
    P2 = cio.parse_bundle(text, bs)
    assert P2.transitions == P.transitions
    assert cio.bundle_to_str(P2) == text


def test_parse_errors():
    with pytest.raises(cio.ParseError):
        cio.parse_simplicial_set("nonsense")
    with pytest.raises(cio.ParseError):
        cio.parse_polyform("form v2; bad")


# ---------------------------------------------------------------------------
# CLI


def test_cli_betti(capsys):
    rc = main(["betti", "--space", "boundary-sphere:3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "betti: 1 0 0 1" in out


def test_cli_chern_clutch(capsys):
    rc = main(["chern", "--bundle", "clutch:3", "--poly", "chern:1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "pairings=[3]" in out
    assert "PASS winding-oracle-agreement" in out


def test_cli_clutch_generate_and_consume(tmp_path, capsys):
    gen = tmp_path / "gen"
    rc = main(["clutch", "--n", "2", "--out", str(gen)])
    assert rc == 0
    capsys.readouterr()
    rc = main([
        "chern",
        "--bundle", str(gen / "bundle.txt"),
        "--space", str(gen / "space.txt"),
        "--connection", str(gen / "connection.txt"),
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "pairings=[2]" in out


def test_cli_generate_trivial(tmp_path, capsys):
    rc = main(["generate", "trivial", "--space", "boundary-sphere:2", "--group", "su2", "--out", str(tmp_path / "t")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS serialization-roundtrip" in out


def test_cli_generate_horn_demo(tmp_path, capsys):
    rc = main(["generate", "horn-demo", "--n", "2", "--k", "1", "--seed", "5", "--out", str(tmp_path / "h")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS filler-restriction" in out


def test_cli_horn_fill(capsys):
    rc = main(["horn-fill", "--n", "3", "--k", "2", "--seed", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS restriction-equality" in out and "PASS refill-stability" in out


def test_cli_reznikov_modes(capsys):
    rc = main(["reznikov", "--k", "2", "--order", "16", "--probes", "20", "--mode", "float"])
    out = capsys.readouterr().out
    assert rc == 0 and "PASS proportional-to-trace-form" in out
    rc = main(["reznikov", "--k", "2"])  # exact mode rejected
    assert rc == 2
    rc = main(["reznikov", "--k", "2", "--order", "1", "--mode", "float"])
    assert rc == 2


def test_cli_usage_errors(capsys):
    assert main(["betti", "--space", "no-such-file"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["not-a-command"])
    assert e.value.code == 2


def test_cli_math_failure(tmp_path, capsys):
    gen = tmp_path / "gen"
    main(["clutch", "--n", "1", "--out", str(gen)])
    capsys.readouterr()
    text = (gen / "bundle.txt").read_text()
    broken = text.replace("exp([0: 1*tau^1*x1])", "exp([0: 1/3*x1])")
    assert broken != text
    (gen / "broken.txt").write_text(broken)
    rc = main(["chern", "--bundle", str(gen / "broken.txt"), "--space", str(gen / "space.txt")])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL" in out


def test_cli_determinism(tmp_path, capsys):
    argv = ["verify", "--suite", "simplicial", "--seed", "3"]
    rc1 = main(argv)
    out1 = capsys.readouterr().out
    rc2 = main(argv)
    out2 = capsys.readouterr().out
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_cli_report_written(tmp_path, capsys):
    out_file = tmp_path / "report.txt"
    rc = main(["betti", "--space", "two-disk", "--out", str(out_file)])
    stdout = capsys.readouterr().out
    assert rc == 0
    assert out_file.read_text() == stdout


def test_cli_verify_all(capsys):
    rc = main(["verify", "--suite", "all", "--seed", "0"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "result: pass" in out
    assert "FAIL" not in out
    assert out.count("PASS") >= 25
