import json

import pandas as pd
import pytest

from app.config import EXIT_INEQUIVALENT, EXIT_INPUT_ERROR, EXIT_OK, EXIT_UNDETERMINED
from app.ingestion.loader import serialize_record
from app.invariants.fixtures import cp2, kodaira, s2quot
from app.main import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def write_record(tmp_path, name, data):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


# --- fixture / check ---

def test_fixture_prints_record(capsys):
    code, report = run(capsys, "fixture", "kodaira")
    assert code == EXIT_OK
    assert report == serialize_record(kodaira())


def test_unknown_fixture(capsys):
    code, report = run(capsys, "fixture", "enriques")
    assert code == EXIT_INPUT_ERROR
    assert "Unknown fixture" in report["error"]


@pytest.mark.parametrize("name", ["kodaira", "cp2", "s2xt2", "s2quot", "t4", "s2xt2free"])
def test_check_fixtures(capsys, name):
    code, report = run(capsys, "check", name)
    assert code == EXIT_OK
    assert report["verdict"] == "valid"
    assert report["violations"] == []


def test_check_non_delzant_record(capsys, tmp_path):
    data = serialize_record(cp2())
    data["delta"] = [["0", "0"], ["2", "1"], ["1", "2"]]
    code, report = run(capsys, "check", write_record(tmp_path, "bad-delta", data))
    assert code == EXIT_INEQUIVALENT
    assert report["verdict"] == "invalid"
    assert any("not Delzant" in v for v in report["violations"])


def test_check_bad_signature_warns(capsys, tmp_path):
    data = serialize_record(s2quot())
    data["signature"] = {"genus": 0, "orders": [3]}
    data["monodromy"]["gamma"] = [["0", "0"]]
    code, report = run(capsys, "check", write_record(tmp_path, "teardrop", data))
    assert code == EXIT_OK
    assert report["warnings"][0].startswith("bad signature (0; 3)")


def test_schema_error_reports_location(capsys, tmp_path):
    data = serialize_record(kodaira())
    data["colour"] = "blue"
    code, report = run(capsys, "check", write_record(tmp_path, "extra", data))
    assert code == EXIT_INPUT_ERROR
    assert report["location"] == "$.colour"
    assert "violations" not in report


def test_schema_errors_are_all_reported(capsys, tmp_path):
    data = serialize_record(s2quot())
    data["area"] = "1/0"
    data["monodromy"]["gamma"][0] = ["1/2"]
    code, report = run(capsys, "check", write_record(tmp_path, "twice", data))
    assert code == EXIT_INPUT_ERROR
    assert report["location"] == "$.area"
    assert report["violations"] == ["$.area: zero denominator", "$.monodromy: row 0 has 1 entries, expected 2"]


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"kind\": ", encoding="utf-8")
    code, report = run(capsys, "check", str(path))
    assert code == EXIT_INPUT_ERROR
    assert report["error"].startswith("malformed JSON")


# --- compare ---

def test_compare_equal_records(capsys):
    code, report = run(capsys, "compare", "kodaira", "kodaira")
    assert code == EXIT_OK
    assert report["verdict"] == "Equivalent"


def test_compare_separates(capsys):
    code, report = run(capsys, "compare", "kodaira", "cp2")
    assert code == EXIT_INEQUIVALENT
    assert report == {"schema": 1, "verdict": "Inequivalent", "separator": "t_h"}


def test_compare_different_kinds(capsys):
    code, report = run(capsys, "compare", "kodaira", "s2quot")
    assert code == EXIT_INPUT_ERROR
    assert report["violations"] == ["coisotropic", "symplectic_orbit"]


def test_compare_holonomy_only_is_undetermined(capsys, tmp_path):
    data = serialize_record(kodaira())
    data["tau"][0] = ["1/2", "0"]
    code, report = run(capsys, "compare", "kodaira", write_record(tmp_path, "shifted", data))
    assert code == EXIT_UNDETERMINED
    assert report["verdict"] == "Undetermined"


def test_compare_area(capsys, tmp_path):
    data = serialize_record(s2quot())
    data["area"] = "3"
    code, report = run(capsys, "compare", "s2quot", write_record(tmp_path, "big", data))
    assert code == EXIT_INEQUIVALENT
    assert report["separator"] == "area"


def test_compare_with_witness(capsys):
    code, report = run(capsys, "compare", "s2quot", "s2quot")
    assert code == EXIT_OK
    assert report["witness"] == [[1, 0], [0, 1]]


def test_compare_rejects_invalid_records(capsys, tmp_path):
    data = serialize_record(s2quot())
    data["area"] = "-1"
    code, report = run(capsys, "compare", "s2quot", write_record(tmp_path, "negative", data))
    assert code == EXIT_INPUT_ERROR
    assert report["violations"] == ["second: area must be positive, got -1"]


# --- classify4 / model ---

@pytest.mark.parametrize("name, case", [
    ("cp2", "Toric"),
    ("s2xt2", "MixedS2T2"),
    ("kodaira", "FreeLagrangian"),
    ("s2quot", "OrbifoldBundle"),
])
def test_classify4(capsys, name, case):
    code, report = run(capsys, "classify4", name)
    assert code == EXIT_OK
    assert report["case"] == case


def test_classify4_action_record(capsys, tmp_path):
    data = {"schema": 1, "kind": "action4", "arm": "symplectic",
            "record": serialize_record(s2quot(), nested=True)}
    code, report = run(capsys, "classify4", write_record(tmp_path, "action", data))
    assert code == EXIT_OK
    assert report["signature"] == "(0; 2, 2)"
    assert report["monodromy"] == [["1/2", "0"], ["1/2", "0"]]


def test_classify4_bad_signature(capsys, tmp_path):
    data = serialize_record(s2quot())
    data["signature"] = {"genus": 0, "orders": [2, 3]}
    data["monodromy"]["gamma"] = [["0", "0"], ["0", "0"]]
    code, report = run(capsys, "classify4", write_record(tmp_path, "spindle", data))
    assert code == EXIT_INEQUIVALENT
    assert report["error"] == "inconsistent record"


def test_model_reports(capsys):
    code, report = run(capsys, "model", "kodaira")
    assert code == EXIT_OK
    assert report["total_dim"] == 4
    assert report["base_first_betti"] == 3
    assert report["nilpotency_step"] == 2

    code, report = run(capsys, "model", "s2quot")
    assert code == EXIT_OK
    assert report["generators"] == ["gamma1"]
    assert report["monodromy"] == {"gamma1": ["1/2", "0"]}
    assert report["euler_characteristic"] == "1"


# --- orbifold ---

def test_orbifold_homology(capsys):
    code, report = run(capsys, "orbifold", "homology", "-g", "1", "-o", "4,6")
    assert code == EXIT_OK
    assert report["group"] == "Z^2 + Z/2"
    assert report["torsion"] == [2]
    assert report["bad"] is False


def test_orbifold_bad(capsys):
    code, report = run(capsys, "orbifold", "bad", "-g", "0", "-o", "2,3")
    assert code == EXIT_INEQUIVALENT
    assert report["bad"] is True
    code, _ = run(capsys, "orbifold", "bad", "-g", "0", "-o", "2,2")
    assert code == EXIT_OK


@pytest.mark.parametrize("orders", ["2,x", "1"])
def test_orbifold_bad_orders(capsys, orders):
    code, report = run(capsys, "orbifold", "homology", "-g", "0", "-o", orders)
    assert code == EXIT_INPUT_ERROR
    assert report["location"] == "-o"


# --- verify ---

def test_verify_orbifold_is_reproducible(capsys):
    main(["verify", "orbifold", "--trials", "40", "--seed", "5"])
    first = capsys.readouterr().out
    main(["verify", "orbifold", "--trials", "40", "--seed", "5"])
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["passed"]
    assert report["trials"] == 40
    assert report["seed"] == 5


def test_verify_writes_csv(capsys, tmp_path):
    target = tmp_path / "sweep.csv"
    code, report = run(capsys, "verify", "group-axioms", "kodaira", "--trials", "25", "--csv", str(target))
    assert code == EXIT_OK
    assert report["failures"] == {"associative": 0, "identity": 0, "inverse": 0}
    table = pd.read_csv(target)
    assert len(table) == 25
    assert list(table.columns) == ["trial", "associative", "identity", "inverse"]


def test_verify_hamiltonian_is_marked_approximate(capsys):
    code, report = run(capsys, "verify", "hamiltonian", "--grid", "30")
    assert code == EXIT_OK
    assert report["approximate"] is True
    assert report["max_residual"] < 1e-6


def test_verify_group_axioms_needs_coisotropic_record(capsys):
    code, report = run(capsys, "verify", "group-axioms")
    assert code == EXIT_INPUT_ERROR
    code, report = run(capsys, "verify", "group-axioms", "s2quot")
    assert code == EXIT_INPUT_ERROR
    assert report["location"] == "$.kind"


# --- settings ---

def test_usage_errors(capsys):
    assert main([]) == EXIT_INPUT_ERROR
    assert main(["classify5", "cp2"]) == EXIT_INPUT_ERROR


def test_bad_environment_value(capsys, monkeypatch):
    monkeypatch.setenv("TORUSINV_SEED", "abc")
    code, report = run(capsys, "orbifold", "homology", "-g", "0")
    assert code == EXIT_INPUT_ERROR
    assert "TORUSINV_SEED" in report["error"]


def test_environment_sets_defaults(capsys, monkeypatch):
    monkeypatch.setenv("TORUSINV_TRIALS", "7")
    code, report = run(capsys, "verify", "orbifold")
    assert code == EXIT_OK
    assert report["trials"] == 7
