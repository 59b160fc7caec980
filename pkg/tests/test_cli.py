import io
import json
from pathlib import Path

import jsonschema
import pytest

from corrcoh import cli, report

MODELS = Path(__file__).resolve().parent.parent / "models"
DESK = str(MODELS / "desk.txt")
UNDECIDED = str(MODELS / "undecided.txt")


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def test_run_config_validation():
    with pytest.raises(ValueError):
        cli.RunConfig(order_cap=0)
    with pytest.raises(ValueError):
        cli.RunConfig(flavor="X")
    assert cli.RunConfig().caps()["order_cap"] == 4


def test_homology_reachability():
    # one-way M identifies a with b, two-way M does not
    code, text = run("homology", DESK, "--y", "pt", "--x", "X3", "--m", "M1", "--flavor", "j")
    assert code == 0 and "H_0(pt, X3) = Z^2" in text
    code, text = run("homology", DESK, "--y", "pt", "--x", "X3", "--m", "M", "--flavor", "j")
    assert code == 0 and "H_0(pt, X3) = Z^3" in text
    assert "degree_cap=2" in text and "order_cap=4" in text


def test_homology_weight_obstruction():
    code, text = run("homology", DESK, "--y", "pt", "--x", "Heavy", "--m", "M")
    assert code == 0 and "SC = 0" in text


def test_homotopy_verdicts():
    code, text = run("homotopy", DESK, "--f", "f", "--g", "f", "--m", "M")
    assert code == 0 and "verdict: yes" in text and "witness" in text
    code, text = run("homotopy", DESK, "--f", "f", "--g", "h", "--m", "M1")
    assert code == 0 and "no-within-cap" in text
    code, text = run("homotopy", DESK, "--f", "f", "--g", "g", "--m", "M1")
    assert code == 0 and "verdict: yes" in text


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("space Y\n  points: a\n  weight: a=?\n")
    assert run("homology", str(bad), "--y", "Y", "--x", "Y", "--m", "M")[0] == cli.EXIT_PARSE
    assert run("homology", DESK, "--y", "pt", "--x", "X3", "--m", "M", "--order-cap", "0")[0] == cli.EXIT_PARSE
    assert run("homology", DESK, "--y", "pt", "--x", "X3", "--m", "M", "--flavor", "j",
               "--enumeration-cap", "1")[0] == cli.EXIT_CAP
    assert run("homotopy", UNDECIDED, "--f", "f", "--g", "g", "--m", "M", "--order-cap", "1",
               "--class-bound", "1")[0] == cli.EXIT_UNDECIDED
    assert run("homotopy", DESK, "--f", "f", "--g", "nope", "--m", "M")[0] == cli.EXIT_FAIL
    with pytest.raises(SystemExit) as e:
        run("homology", DESK)
    assert e.value.code == 2


def test_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("space Y\n  points: a\n  weight: a=?\n")
    run("homology", str(bad), "--y", "Y", "--x", "Y", "--m", "M")
    assert f"{bad}:3:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["homology", DESK, "--y", "pt", "--x", "X3", "--m", "M1", "--flavor", "j"],
    ["homotopy", DESK, "--f", "f", "--g", "f", "--m", "M"],
    ["distance", DESK, "--y", "pt", "--z", "Z", "--m", "M", "--variant", "one_point"],
])
def test_json_round_trips_through_schema(argv):
    code, text = run(*argv, "--output", "json")
    rep = report.from_json(text)
    assert report.to_json(rep) == text.rstrip("\n")
    assert run(*argv, "--output", "json")[1] == text


def test_schema_rejects_malformed():
    with pytest.raises(jsonschema.ValidationError):
        report.validate({"command": "distance", "status": "ok", "caps": {}, "result": {"value": "0", "certificate": {}}})
    with pytest.raises(jsonschema.ValidationError):
        report.validate({"command": "homotopy", "status": "ok", "caps": {}, "result": {"verdict": "maybe"}})


def test_distance_report():
    code, text = run("distance", DESK, "--y", "pt", "--z", "pt", "--m", "M", "--output", "json")
    rep = json.loads(text)
    assert code == 0 and rep["result"]["value"] == "0" and rep["standin"] and rep["label"] == "BCZ-standin"
    one = json.loads(run("distance", DESK, "--y", "pt", "--z", "Z", "--m", "M", "--variant", "one_point",
                         "--output", "json")[1])
    two = json.loads(run("distance", DESK, "--y", "Z", "--z", "pt", "--m", "M", "--variant", "one_point",
                         "--output", "json")[1])
    assert one["result"]["value"] == two["result"]["value"] != "inf"


def test_verify_default_and_deterministic():
    code, a = run("verify", "--seed", "7")
    assert code == 0 and a.count("PASS") == 9 and "FAIL" not in a
    assert run("verify", "--seed", "7")[1] == a


def test_verify_sign_bug_dumps_expansion():
    code, text = run("verify", "--sign-bug")
    assert code == cli.EXIT_FAIL
    assert "FAIL d^2 = 0" in text and "sum = " in text
    assert sum(1 for line in text.splitlines() if line.strip().startswith(("+ d^", "- d^"))) == 8
