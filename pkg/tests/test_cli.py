import json
import subprocess
import sys

import pytest

from qmagnus.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def flagship(tmp_path, capsys):
    path = tmp_path / "flagship.json"
    code, _, _ = run(capsys, "extend", "root", "--w", "a^2 b^2", "--m", "3", "--p", "2",
                     "--output", str(path))
    assert code == 0
    return str(path)


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "[x1,x2]", "--degree", "3")
    assert code == 0
    assert out["terms"] == [{"mon": [], "c": "1"}, {"mon": [0, 1], "c": "1"},
                            {"mon": [1, 0], "c": "-1"}]


def test_eval_mod_p(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "x1^(1/2)", "--p", "3", "--domain", "fp",
                       "--degree", "3")
    assert code == 0
    assert out["domain"] == "fp"
    assert {"mon": [0], "c": "2"} in out["terms"]


def test_certify_exit_codes(capsys):
    code, out, _ = run(capsys, "certify", "--expr", "[x1^(1/2), x2]")
    assert code == 0 and out["degree"] == 2
    code, out, _ = run(capsys, "certify", "--expr", "(x1^(1/3))^3 x1^-1")
    assert code == 3 and out["result"] == "inconclusive"


def test_parse_error_exit_code(capsys):
    code, out, err = run(capsys, "eval", "--expr", "x1 (")
    assert code == 2 and out is None
    assert "position" in err


def test_bad_prime(capsys):
    code, _, err = run(capsys, "quotient-info", "--p", "4", "--d", "2", "--n", "2")
    assert code == 2 and "not prime" in err


def test_quotient_info_and_cap(capsys):
    code, out, _ = run(capsys, "quotient-info", "--p", "3", "--d", "2", "--n", "3")
    assert code == 0 and out["order"] == 27
    code, out, _ = run(capsys, "quotient-info", "--p", "2", "--d", "2", "--n", "5",
                       "--cap", "100")
    assert code == 5 and out["error"] == "cap-exceeded"


def test_beta1(capsys, flagship):
    code, out, err = run(capsys, "beta1", flagship, "--levels", "2,3")
    assert code == 0
    assert [lv["b"] for lv in out["levels"]] == ["5/4", "33/32"]
    assert err.count("completed") == 2


def test_beta1_relator_violation(capsys, tmp_path):
    path = tmp_path / "z2.json"
    path.write_text(json.dumps({"p": 3, "ambient_rank": 2, "generators": ["a", "b"],
                                "relators": ["[a, b]"], "rho": {"a": "x1", "b": "x2"}}))
    code, out, _ = run(capsys, "beta1", str(path), "--levels", "2,3")
    assert code == 4 and out["level"] == 3
    code, out, _ = run(capsys, "beta1", str(path), "--levels", "2,3,4", "--commutative")
    assert code == 0
    assert [lv["b"] for lv in out["levels"]] == ["2/9", "2/9", "2/81"]


def test_levels_validation(capsys, flagship):
    code, _, _ = run(capsys, "beta1", flagship, "--levels", "3,2")
    assert code == 2


def test_probe_and_amalgam(capsys, flagship):
    code, out, _ = run(capsys, "probe", flagship, "--levels", "2,3")
    assert code == 0 and all(lv["consistent"] for lv in out["levels"])
    code, out, _ = run(capsys, "amalgam", flagship, "--H", "a", "--H", "b", "--B", "t",
                       "--A", "t^3", "--level", "3")
    assert code == 0 and out["contained"]


def test_extend_errors(capsys):
    code, _, err = run(capsys, "extend", "root", "--w", "a", "--m", "2", "--p", "2")
    assert code == 2 and "gcd" in err
    code, out, _ = run(capsys, "extend", "centralizer", "--w", "a", "--lambda", "Zp(41;20)",
                       "--p", "3")
    assert code == 0 and out["relators"] == ["t a t^-1 a^-1"]


def test_output_is_deterministic(capsys, flagship):
    first = run(capsys, "beta1", flagship, "--levels", "2,3")[1]
    second = run(capsys, "beta1", flagship, "--levels", "2,3")[1]
    assert first == second


def test_cap_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("QMAGNUS_CAP", "50")
    code, _, _ = run(capsys, "quotient-info", "--p", "2", "--d", "2", "--n", "4")
    assert code == 5


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qmagnus", "quotient-info", "--p", "5",
                          "--d", "2", "--n", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["order"] == 25


def test_identity_and_single_generator(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "1")
    assert code == 0 and out["terms"] == [{"mon": [], "c": "1"}]
    code, out, _ = run(capsys, "certify", "--expr", "x1")
    assert code == 0 and out["degree"] == 1
