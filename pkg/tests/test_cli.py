import json
import subprocess
import sys
from pathlib import Path

import pytest

from monty_lab.cli import main
from monty_lab.signaling import ROTATION_F

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def usage_exit(capsys, *argv):
    with pytest.raises(SystemExit) as e:
        main(list(argv))
    capsys.readouterr()
    return e.value.code


def test_enumerate_conie(capsys):
    code, out, _ = run(capsys, "enumerate", "--doors", "3", "--side", "conie", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["count"] == 12 and len(obj["labels"]) == 12
    assert obj["schema"] == "monty-lab/v1"
    code, out, _ = run(capsys, "enumerate", "--doors", "4", "--format", "csv")
    assert out.splitlines()[0] == "label" and len(out.splitlines()) == 33


def test_enumerate_monte_reports_count_discrepancy(capsys):
    code, out, _ = run(capsys, "enumerate", "--side", "monte", "--format", "json")
    obj = json.loads(out)
    assert obj["count"] == 8 and obj["published_count"] == 6
    assert "8" in obj["note"] and "6" in obj["note"]
    code, out, _ = run(capsys, "enumerate", "--side", "monte")
    assert "count = 8" in out and "published count = 6" in out


def test_enumerate_sequential_unsupported(capsys):
    code, out, err = run(capsys, "enumerate", "--design", "sequential")
    assert code == 64 and out == "" and "at-once" in err


def test_matrix_csv(capsys):
    code, out, _ = run(capsys, "matrix", "--doors", "3", "--format", "csv")
    rows = [line.split(",") for line in out.splitlines()]
    assert len(rows) == 13 and len(rows[0]) == 9
    header = rows[0]
    by_label = {r[0]: r[1:] for r in rows[1:]}
    assert by_label["1SS"] == ["011"] * 8
    assert by_label["1HS"][header.index("312") - 1] == "001"


def test_matrix_golden(capsys, tmp_path):
    code, _, err = run(capsys, "matrix", "--format", "csv", "--check-golden",
                       str(GOLDEN / "matrix_n3.csv"))
    assert code == 0
    bad = tmp_path / "bad.csv"
    bad.write_text((GOLDEN / "matrix_n3.csv").read_text().replace("011", "111", 1))
    code, out, err = run(capsys, "matrix", "--format", "csv", "--check-golden", str(bad))
    assert code == 3 and "mismatch" in err


def test_matrix_json_and_table(capsys):
    code, out, _ = run(capsys, "matrix", "--format", "json")
    assert json.loads(out)["kind"] == "win-matrix"
    code, out, _ = run(capsys, "matrix")
    assert out.splitlines()[1].startswith("1HH")


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--all")
    assert code == 0 and out.rstrip().endswith("PASS")
    for n in (3, 4, 5, 6):
        assert f"at-once-{n}: PASS" in out


def test_verify_doors3_mentions_ceiling(capsys):
    code, out, _ = run(capsys, "verify", "--doors", "3")
    assert code == 0 and "max uniform prob = 2/3" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--format", "json")
    obj = json.loads(out)
    assert obj["passed"] and [r["max_uniform_prob"] for r in obj["at_once"]] == ["2/3", "3/4", "4/5", "5/6"]


def test_verify_doctored_signal(capsys, tmp_path):
    obj = ROTATION_F.to_json_obj()
    obj["1"]["1"] = [3, 2]
    path = tmp_path / "f.json"
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", "--signal-file", str(path))
    assert code == 2 and "FAIL" in out and "collide" in out
    code, out, _ = run(capsys, "signal", "verify", "--signal-file", str(path))
    assert code == 2 and "NOT bijective" in out


def test_signal_encode_decode(capsys):
    assert run(capsys, "signal", "encode", "--p", "2", "--x", "1")[1] == "3 4\n"
    assert run(capsys, "signal", "decode", "--x", "1", "--r", "3,2")[1] == "4\n"
    code, out, err = run(capsys, "signal", "decode", "--x", "1", "--r", "1,2")
    assert code == 4 and out == "" and "protocol violation" in err


def test_signal_verify_and_family(capsys):
    code, out, _ = run(capsys, "signal", "verify")
    assert code == 0 and out.strip() == "bijective"
    code, out, _ = run(capsys, "signal", "family", "--key", "2,1,3,4", "--format", "json")
    obj = json.loads(out)
    assert obj["key"] == [2, 1, 3, 4] and obj["table"]["2"]["2"] == [1, 3]
    code, out, _ = run(capsys, "signal", "family", "--round", "0")
    assert "x=1: 1->23  2->34  3->42  4->32" in out


def test_signal_missing_args():
    with pytest.raises(SystemExit) as e:
        main(["signal", "encode"])
    assert e.value.code == 64


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "cooperative", "--trials", "1000", "--seed", "7",
                       "--format", "json")
    obj = json.loads(out)
    assert obj["wins"] == 1000 and obj["exact"] == "1/1"
    code, out2, _ = run(capsys, "simulate", "cooperative", "--trials", "1000", "--seed", "7",
                        "--format", "json")
    assert out == out2


def test_simulate_random_guess_rotating(capsys):
    code, out, _ = run(capsys, "simulate", "cooperative", "--x", "random", "--rotating",
                       "--trials", "300", "--format", "json")
    obj = json.loads(out)
    assert obj["x"] == "random" and obj["wins"] == 300


def test_usage_errors(capsys):
    assert usage_exit(capsys, "simulate", "nonsense") == 64
    assert usage_exit(capsys, "simulate", "slm", "--conie", "psychic") == 64
    assert usage_exit(capsys) == 64
    code, _, _ = run(capsys, "signal", "encode", "--p", "7")
    assert code == 64


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "monty_lab", "simulate", "slm", "--trials", "2000",
           "--seed", "42", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["exact"] == "3/4"
