import json
from fractions import Fraction

import pytest

from cleftdga.cli import main
from cleftdga.errors import InvalidMetric, ParseError
from cleftdga.geometry import builtin, load_geometry, parse_expression, parse_geometry

from conftest import geometry

SPHERE_FILE = """\
# unit sphere near (1, 1)
name = mysphere
coordinates = th, ph
backend = jet
base_point = 1, 1
order = 4
metric:
    1, 0
    0, sin(th)^2
"""

PLANE_FILE = """\
name = plane
coordinates = u, v
metric:
    1 + u^2, 0
    0, 1 + v^2
conformal_tau = u, v
conformal_alpha = 2
"""


def test_expression_parser():
    chart = geometry("flat2").chart
    x, y = chart.coordinate(0), chart.coordinate(1)
    assert parse_expression("x^2 + 3*x*y - 1/2", chart) == x * x + x * y * 3 - Fraction(1, 2)
    assert parse_expression("-(x - y)^2", chart) == -((x - y) * (x - y))
    assert parse_expression("x^-1", chart) == x.inverse()
    assert parse_expression("0.25", chart) == chart.ring.const(Fraction(1, 4))


@pytest.mark.parametrize("text", ["x +", "x^y", "q", "foo(x)", "x / 0", "'a'"])
def test_expression_errors(text):
    with pytest.raises(ParseError):
        parse_expression(text, geometry("flat2").chart)


def test_sphere_file_matches_builtin(tmp_path):
    path = tmp_path / "sphere.geom"
    path.write_text(SPHERE_FILE)
    geom = load_geometry(str(path)).build()
    ref = geometry("sphere2")
    assert geom.name == "mysphere"
    diff = geom.metric.g[1][1].value() - ref.metric.g[1][1].value()
    assert abs(float(diff)) < 1e-40


def test_conformal_block_defaults_beta():
    gd = parse_geometry(PLANE_FILE)
    assert gd.conformal_beta is None
    assert gd.build().conformal().beta == 1


@pytest.mark.parametrize(
    "text",
    [
        "coordinates = x\nmetric:\n    1\n",
        "name = a\ncoordinates = x, x\nmetric:\n    1, 0\n    0, 1\n",
        "name = a\ncoordinates = x\n",
        "name = a\ncoordinates = x\ncolour = red\nmetric:\n    1\n",
        "name = a\ncoordinates = x, y\nmetric:\n    1\n    0, 1\n",
        "name = a\ncoordinates = x\nbackend = float\nmetric:\n    1\n",
    ],
)
def test_definition_errors(text):
    with pytest.raises(ParseError):
        parse_geometry(text)


def test_asymmetric_metric_rejected():
    with pytest.raises(InvalidMetric):
        parse_geometry("name = a\ncoordinates = x, y\nmetric:\n    1, x\n    0, 1\n")


def test_builtins_build():
    for name in ("flat2", "flat3", "flat3sc", "sphere2", "sphere2r", "sphere2r:1/2", "diagpoly"):
        assert builtin(name).build().dim in (2, 3)
    with pytest.raises(ParseError):
        builtin("sphere2r:-1")


# command line -----------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_exit_status_and_determinism(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, first, _ = run(capsys, "verify", "--geometry", "flat2", "--suite", "riemann", "--samples", "6", "--format", "json", "--report", str(report))
    assert code == 0
    _, second, _ = run(capsys, "verify", "--geometry", "flat2", "--suite", "riemann", "--samples", "6", "--format", "json")
    assert first == second
    doc = json.loads(report.read_text())
    assert doc["passed"] is True
    assert doc["environment"]["geometry"] == "flat2"


def test_zero_tolerance_on_jets_fails(capsys):
    code, out, _ = run(capsys, "ricci", "--geometry", "sphere2", "--tolerance", "0")
    assert code == 1
    assert "FAIL" in out


def test_usage_errors_exit_two(capsys, tmp_path):
    assert run(capsys, "spacetime", "--geometry", "diagpoly")[0] == 2
    assert run(capsys, "verify", "--geometry", str(tmp_path / "missing"))[0] == 2
    bad = tmp_path / "bad.geom"
    bad.write_text("name = a\ncoordinates = x\nmetric:\n    x +\n")
    code, _, err = run(capsys, "verify", "--geometry", str(bad))
    assert code == 2 and "column" in err
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2


def test_ricci_table(capsys):
    code, out, _ = run(capsys, "ricci", "--geometry", "sphere2")
    assert code == 0
    assert "table: ricci" in out
    assert "0.7080734183" in out  # sin(1)^2 at the base point
    assert "base point" in out


def test_quantize_tables(capsys):
    code, out, _ = run(capsys, "quantize", "--geometry", "flat2", "--lambda", "2", "--samples", "5")
    assert code == 0
    assert "[x, dx]   [(2)] theta'" in out
    code, out, _ = run(capsys, "quantize", "--geometry", "flat2", "--lambda", "0", "--samples", "5")
    assert code == 0
    assert "theta'" not in out.split("table: extension")[1].split("d.theta'")[0]


def test_z2_command(capsys):
    code, out, _ = run(capsys, "z2", "--samples", "6")
    assert code == 0
    assert "z2.value_delta" in out


def test_spacetime_reports_theta_row_mismatch(capsys):
    code, out, _ = run(capsys, "spacetime", "--geometry", "flat2", "--samples", "6", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    failing = {c["id"] for c in doc["checks"] if not c["passed"]}
    assert failing == {"spacetime.t_theta", "spacetime.t_dtheta"}
