"""End-to-end tests of the command-line interface."""

import json

import pytest

from src.main import VERIFY_TARGETS, build_parser, run


def run_json(capsys, *argv):
    code = run([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_lattice_show(capsys):
    code, data = run_json(capsys, "lattice", "show", "p2-double-blowup")
    assert code == 0
    assert data["fields"]["polarization"] == "6L-2Fb-3Fp"
    assert data["fields"]["class C"] == "2L-Fb-Fp"
    assert [row["curve"] for row in data["tables"]["curves"]] == ["line", "Fb", "Fp"]
    assert data["tables"]["gram"][1] == {"": "Fb", "L": 0, "Fb": -2, "Fp": 1}


def test_lattice_intersect(capsys):
    code, data = run_json(capsys, "lattice", "intersect", "p2-double-blowup", "C", "F′")
    assert code == 0
    assert data["fields"]["intersection"] == 0


def test_lattice_classify(capsys):
    code, data = run_json(capsys, "lattice", "classify", "p2-double-blowup", "C+Fb+Fp")
    assert code == 0
    assert data["fields"]["nef"] is True
    assert data["fields"]["ample"] is False
    assert data["fields"]["big"] is True


def test_blow_up_writes_loadable_surface(capsys, tmp_path):
    target = tmp_path / "bl.env"
    code, data = run_json(capsys, "lattice", "blow-up", "p2", "--center-on", "line", "--label", "E",
                          "--write", str(target))
    assert code == 0
    assert data["fields"]["contracted"] == "E"
    code, data = run_json(capsys, "zariski", str(target), "L")
    assert code == 0
    assert data["fields"]["positive part P"] == "L"


def test_zariski(capsys):
    code, data = run_json(capsys, "zariski", "p2-double-blowup", "C+Fb+2Fp")
    assert code == 0
    assert data["fields"]["positive part P"] == "2L"
    assert data["fields"]["negative part N"] == "Fp"
    assert data["tables"]["negative part"] == [{"curve": "Fp", "multiplicity": 1}]


def test_zariski_not_psef(capsys):
    code, data = run_json(capsys, "zariski", "p2-double-blowup", "0-L")
    assert code == 0
    assert data["fields"]["pseudoeffective"] is False


def test_baselocus_divisor(capsys):
    code, data = run_json(capsys, "baselocus", "p2-double-blowup", "--divisor", "L+Fb+Fp")
    assert code == 0
    assert data["fields"]["B-"] == "{Fb, Fp}"


def test_baselocus_bundle(capsys):
    code, data = run_json(capsys, "baselocus", "p2-double-blowup", "--bundle", "0; Fb", "--twist", "C")
    assert code == 0
    assert data["fields"]["B+"] == "{Fb, Fp}"
    assert data["fields"]["V-big"] is True


def test_schur_commands(capsys):
    code, data = run_json(capsys, "schur", "decompose", "3", "2")
    assert code == 0 and data["fields"]["total dimension"] == 8
    code, data = run_json(capsys, "schur", "kostka", "2,1", "1,1,1")
    assert code == 0 and data["fields"]["kostka"] == 2
    code, data = run_json(capsys, "schur", "kostka", "2,1", "1,2")
    assert code == 0 and data["fields"]["kostka"] == 1
    code, data = run_json(capsys, "schur", "pieri", "2,1", "2")
    assert code == 0 and data["fields"]["multiplicity"] == 1
    code, data = run_json(capsys, "schur", "witness", "5,1", "1", "2", "3")
    assert code == 0 and data["fields"]["holds"] is True


def test_chern_ch(capsys):
    code, data = run_json(capsys, "chern", "ch", "p2", "L; 0-L")
    assert code == 0
    assert data["fields"]["ch"] == "2 + L^2"
    assert data["fields"]["c"] == "1 - L^2"
    assert data["fields"]["lc"] == "log 2 + 1/2L^2"


def test_chern_additivity(capsys):
    code, data = run_json(capsys, "chern", "check-additivity", "L", "L; 0", "--surface", "p2")
    assert code == 0
    assert data["fields"]["lc additive"] is True
    assert data["fields"]["ch multiplicative"] is True


def test_verify_certificate(capsys):
    code, data = run_json(capsys, "verify", "b-minus-example", "--seed", "5")
    assert code == 0
    assert data["seed"] == 5
    assert data["overall"] == "pass"
    assert data["certificates"][0]["example_id"] == "b-minus-example"


def test_verify_json_is_deterministic(capsys):
    first = run_json(capsys, "verify", "l-counter", "--n-max", "3", "--l-max", "2")
    second = run_json(capsys, "verify", "l-counter", "--n-max", "3", "--l-max", "2")
    assert first == second


@pytest.mark.parametrize("fmt,marker", [
    ("table", "Overall: PASS"),
    ("markdown", "**Overall: PASS**"),
    ("csv", "example,check,expected,computed,provenance,result"),
])
def test_verify_formats(capsys, fmt, marker):
    assert run(["verify", "b-plus-example", "--format", fmt]) == 0
    assert marker in capsys.readouterr().out


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out" / "cert.json"
    assert run(["verify", "b-minus-example", "--format", "json", "--output", str(target)]) == 0
    assert json.loads(target.read_text(encoding="utf-8"))["overall"] == "pass"
    assert "Output saved to" in capsys.readouterr().err


def test_parse_error_exit_code(capsys):
    assert run(["zariski", "p2-double-blowup", "L+Q"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("Error: Unknown label 'Q'")


def test_unknown_surface_exit_code(capsys):
    assert run(["lattice", "show", "no-such-surface"]) == 2
    assert "Unknown surface" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    assert run(["verify", "nothing"]) == 2
    assert run([]) == 2


def test_verify_targets_are_choices():
    parser = build_parser()
    args = parser.parse_args(["verify", "all"])
    assert args.target == "all"
    assert set(VERIFY_TARGETS) >= {"b-minus-example", "b-plus-example", "l-counter"}
