import json
import shutil
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from tordiv import __version__
from tordiv.cli import main
from tordiv.hurwitz import gamma0_plus
from tordiv.io import (
    InputError,
    expansion_from_json,
    expansion_to_json,
    load_workspace,
    parse_rational,
    principal_part_from_json,
    principal_part_to_json,
    workspace_from_json,
)
from tordiv.qseries import PrincipalPart

DATA = Path(__file__).resolve().parents[1] / "src" / "tordiv" / "data"


@pytest.fixture
def data(tmp_path):
    for f in DATA.glob("*.json"):
        shutil.copy(f, tmp_path / f.name)
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational([1, 3]) == Fraction(1, 3)
    assert parse_rational(2) == 2
    for bad in (0.5, True, "x", [1], [1, 0]):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_expansion_round_trip():
    G = gamma0_plus(3, 2)
    assert expansion_from_json(json.loads(json.dumps(expansion_to_json(G)))) == G


def test_principal_part_round_trip():
    F = PrincipalPart({((1,), Fraction(1, 4)): 1, ((0,), Fraction(1)): -2}, {(0,): 10}, step=4)
    back = principal_part_from_json(json.loads(json.dumps(principal_part_to_json(F))), step=4)
    assert back.negative == F.negative and back.constant == F.constant
    assert principal_part_from_json({"negative": [[[0], 1, 1, 2]]}).constant is None


def test_load_workspace(data):
    ws = load_workspace(data / "siegel_workspace_refined.json")
    assert ws.datum.inner_rays == {"I": [((1, -2, 2), "rho1")]}
    assert [r.label for r in ws.datum.rank2] == ["J"]
    assert str(data / "siegel_workspace_refined.json") in ws.sources


def test_workspace_errors(data):
    base = json.loads((data / "siegel_workspace.json").read_text())
    bad = dict(base, g_plus="magic")
    with pytest.raises(InputError):
        workspace_from_json(bad, data)
    bad = dict(base, cusps=base["cusps"] + [base["cusps"][0]])
    with pytest.raises(InputError):
        workspace_from_json(bad, data)
    cusp = dict(base["cusps"][0], z=[1, 1, 0, 0, 0])
    with pytest.raises(InputError):
        workspace_from_json(dict(base, cusps=[cusp]), data)
    # the fan's isotropic ray must be the boundary ray of a listed J
    only_I = [c for c in base["cusps"] if "w" not in c]
    with pytest.raises(InputError):
        workspace_from_json(dict(base, cusps=only_I), data)


def test_lattice_info(data, capsys):
    code, out, _ = run(["lattice-info", data / "siegel_lattice.json", "--precision", "2"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["signature"] == [3, 2]
    assert rep["discriminant"]["order"] == 2
    assert [1, 4] in [e["q"] for e in rep["discriminant"]["elements"]]
    assert "theta" not in rep  # indefinite
    assert rep["meta"]["version"] == __version__
    assert len(rep["meta"]["inputs"][str(data / "siegel_lattice.json")]) == 64


def test_lattice_info_definite_theta(tmp_path, capsys):
    p = tmp_path / "a2.json"
    p.write_text(json.dumps({"label": "A2", "gram": [[2, -1], [-1, 2]]}))
    code, out, _ = run(["lattice-info", p, "--precision", "2"], capsys)
    assert code == 0
    assert "theta" in json.loads(out)


def test_odd_lattice_is_input_error(tmp_path, capsys):
    p = tmp_path / "odd.json"
    p.write_text(json.dumps({"gram": [[1]]}))
    code, _, err = run(["lattice-info", p], capsys)
    assert code == 2 and "not even" in err


def test_missing_file_is_input_error(tmp_path, capsys):
    code, _, _ = run(["lattice-info", tmp_path / "nope.json"], capsys)
    assert code == 2


def test_fan_check(data, capsys, tmp_path):
    out_dir = tmp_path / "reports"
    code, out, _ = run(["fan-check", data / "siegel_fan_refined.json", "--samples", "50", "--out", out_dir], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"]
    assert rep["cones"][0]["stabilizer_order"] == 1
    assert {r["kind"] for r in rep["rays"]} == {"inner", "isotropic"}
    assert json.loads((out_dir / "fan-check.json").read_text()) == rep


def test_fan_check_reports_sigma_stabilizer(data, capsys):
    code, out, _ = run(["fan-check", data / "siegel_fan.json", "--samples", "20"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["cones"][0]["stabilizer_order"] == 3
    assert 2 in {f["stabilizer_order"] for f in rep["faces"]}


def test_multiplicity(data, capsys):
    code, out, _ = run(["multiplicity", data / "siegel_workspace_refined.json", "--m", "1", "--mu", "0", "--c0", "0"],
                       capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["B_J"] == [{"cusp": "J", "mult": [4, 1]}]
    entry = rep["B_I_omega"][0]
    # mult = a + b c0 with b = 1/12, the negative of the closed form's -1/12
    assert entry["N"] == 3 and entry["b"] == [1, 12] and entry["mult"] == entry["a"]
    assert rep["assumptions"]


def test_multiplicity_bad_m(data, capsys):
    code, _, err = run(["multiplicity", data / "siegel_workspace.json", "--m", "1/2", "--mu", "0"], capsys)
    assert code == 2 and "congruent" in err
    code, _, _ = run(["multiplicity", data / "siegel_workspace.json", "--m", "1", "--mu", "0,1"], capsys)
    assert code == 2


def test_borcherds_chi5(data, capsys):
    code, out, _ = run(["borcherds", data / "siegel_workspace_refined.json", data / "siegel_chi5.json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["weight"] == [5, 1]
    assert rep["serre_relation"]["equals_twice_borcherds"] is True
    assert rep["b_j_paths"]["J"]["E2"] == rep["b_j_paths"]["J"]["qdq"] == [1, 2]


def test_borcherds_without_constants(data, capsys):
    code, out, _ = run(["borcherds", data / "siegel_workspace.json", data / "siegel_q_minus_1.json"], capsys)
    assert code == 0
    terms = json.loads(out)["terms"]
    assert {"key": {"type": "BJ", "label": "J"}, "coeff": [4, 1]} in terms
    code, _, err = run(["borcherds", data / "siegel_workspace_refined.json", data / "siegel_q_minus_1.json"], capsys)
    assert code == 1 and "constant" in err


def test_borcherds_rejects_asymmetric_input(data, tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"negative": [[[1], 1, 2, 1]]}))
    code, _, _ = run(["borcherds", data / "siegel_workspace.json", p], capsys)
    assert code == 2


def test_selftest(capsys, tmp_path):
    code, out, _ = run(["selftest", "--quick", "--out", tmp_path], capsys)
    assert code == 0 and "FAIL" not in out
    assert json.loads((tmp_path / "selftest.json").read_text())["results"]


def test_selftest_detects_perturbed_theta(capsys):
    code, out, _ = run(["selftest", "--perturb-theta"], capsys)
    assert code == 1 and "FAIL  theta" in out


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["nonsense"]) == 2
    assert main(["--version"]) == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tordiv", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout
