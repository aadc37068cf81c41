import json
from pathlib import Path

from dkdv.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_correlator_against_oracle(capsys):
    code, out = run(["correlator", "--valencies", "2,4", "--against", "oracle"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["poly"] == "8*x^3 + 4*x"
    assert payload["match"] is True
    assert payload["by_genus"] == {"0": "4", "1": "2"}


def test_resolvent_json(capsys):
    code, out = run(["resolvent", "--order", "2"], capsys)
    assert code == 0
    payload = json.loads(out)
    rows = {r["j"]: r for r in payload["coefficients"]}
    assert rows[1]["a"] == "w[0]*w[-1]"
    assert rows[1]["c"] == "w[-2] + w[-1]"


def test_omega_json(capsys):
    code, out = run(["omega", "--weight", "3"], capsys)
    assert code == 0
    payload = json.loads(out)
    first = payload["entries"][0]
    assert first == {"i": 1, "j": 1, "site": 0, "poly": "w[0]*w[-1]"}


def test_verify_small_suite(capsys):
    code, out = run(["verify", "--suite", "flows"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True


def test_error_payload_and_exit(capsys):
    code, out = run(["census", "--valencies", "3"], capsys)
    assert code == 2
    payload = json.loads(out)
    assert payload["error"] == "ValueError"


def test_csv_format(capsys):
    code, out = run(["census", "--valencies", "4", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "valencies,genus,a_value,gluings"
    assert lines[1] == "4,0,2,2"


def test_hodge_payload(capsys):
    code, out = run(["hodge", "--genus-max", "1", "--probes", "4"], capsys)
    assert code == 0
    payload = json.loads(out)
    values = {(e["g"], tuple(e["indices"])): e["value"] for e in payload["entries"]}
    assert values[(1, (0,))] == "-5/48"
    assert values[(1, (1,))] == "1/24"
    assert all(c["status"] == "pass" for c in payload["checks"])


def test_modified_payload(capsys):
    code, out = run(["modified", "-k", "2", "--weight", "2"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["entries"][0] == {"indices": [1, 1],
                                     "poly": "-1/4 + x^2*eps^-2"}


def test_out_file_and_determinism(tmp_path: Path, capsys):
    f1 = tmp_path / "a.json"
    f2 = tmp_path / "b.json"
    f3 = tmp_path / "c.json"
    assert main(["verify", "--suite", "flows,defrab", "--out", str(f1)]) == 0
    assert main(["verify", "--suite", "flows,defrab", "--out", str(f2)]) == 0
    assert main(["verify", "--suite", "flows,defrab", "--jobs", "3",
                 "--out", str(f3)]) == 0
    b1, b2, b3 = f1.read_bytes(), f2.read_bytes(), f3.read_bytes()
    assert b1 == b2 == b3
