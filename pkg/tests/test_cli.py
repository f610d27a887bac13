import json
import math
import subprocess
import sys

import pytest

from kobageo.cli import (
    COMMANDS, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, SCHEMA_VERSION, parse_complex,
    parse_point, run,
)
from kobageo.errors import ValidationError


def _run(tmp_path, argv, tag="a"):
    js, cs = tmp_path / f"{tag}.json", tmp_path / f"{tag}.csv"
    code = run(argv + ["--out-json", str(js), "--out-csv", str(cs)])
    report = json.loads(js.read_text())
    return code, report, cs.read_bytes() if cs.exists() else None


def test_parse_helpers():
    assert parse_complex("0.5") == 0.5
    assert parse_complex("0.3i") == 0.3j
    assert parse_complex("1-2j") == 1 - 2j
    assert list(parse_point("0,0.5+0.1i")) == [0, 0.5 + 0.1j]
    with pytest.raises(ValidationError):
        parse_point("a,b")


def test_distance_polydisk(tmp_path):
    code, rep, csv = _run(tmp_path, ["distance", "--domain", '{"kind":"polydisk","params":{"d":2}}',
                                     "--from", "0,0", "--to", "0.5,0.3"])
    assert code == EXIT_OK
    assert rep["schema_version"] == SCHEMA_VERSION
    res = rep["result"]
    assert res["upper"] == pytest.approx(0.549306, rel=0.02)
    assert res["lower"] <= math.atanh(0.5) <= res["upper"]
    assert csv.decode().splitlines()[0].startswith("t,")


def test_iterate_hyperbolic(tmp_path):
    code, rep, csv = _run(tmp_path, ["iterate", "--domain", "disk", "--map", "moebius:2,1,1,2",
                                     "--seeds", "3", "--N", "200"])
    assert code == EXIT_OK
    assert rep["result"]["classification"] == "boundary-convergent"
    xi = rep["result"]["limit_point"][0]
    assert abs(complex(*xi) - 1) <= 1e-6
    assert len(csv.decode().strip().splitlines()) == 1 + 3 * 201


def test_examples_report_names_failing_items(tmp_path):
    # eps = 0.3, n = 3 leaves no room for the e^-4 comparison disk
    code, rep, _ = _run(tmp_path, ["examples", "--which", "51", "--eps", "0.3", "--n", "3"])
    assert code == EXIT_OK
    res = rep["result"]
    assert "M_lower(e^-4)" in res["failing"]
    assert rep["domain"] == {"kind": "example51", "params": {"eps": 0.3, "n": 3}}


@pytest.mark.parametrize("argv", [
    ["metric", "--domain", "ball", "--point", "0.1,0", "--direction", "1,0"],
    ["geodesic", "--domain", "disk", "--from", "0", "--to", "0.5i", "--exact"],
    ["gromov", "--domain", "disk", "--p", "1", "--q", "-1", "--n-max", "8"],
    ["visibility", "--domain", "bidisk", "--p", "1,1", "--q=-1,1", "--schedule", "flat",
     "--n-max", "8"],
    ["goldilocks", "--domain", "disk", "--eps0", "0.1", "--r-min", "1e-4", "--no-fit"],
    ["evl", "--domain", "disk", "--center", "1", "--radius", "0.5", "--r-min", "1e-4"],
    ["constancy", "--domain", "disk", "--map", "moebius:2,1,1,2", "--N", "100", "--grid", "10"],
])
def test_commands_deterministic(tmp_path, argv):
    code1, rep1, csv1 = _run(tmp_path, argv + ["--seed", "7"], "a")
    code2, rep2, csv2 = _run(tmp_path, argv + ["--seed", "7"], "b")
    assert code1 == code2 == EXIT_OK
    assert csv1 == csv2 and csv1
    assert rep1 == rep2
    assert rep1["command"] == argv[0]


def test_commands_listed():
    assert set(COMMANDS) == {"metric", "distance", "geodesic", "visibility", "gromov",
                             "goldilocks", "evl", "examples", "iterate", "constancy"}


def test_exit_codes(tmp_path, capsys):
    assert run(["frobnicate"]) == EXIT_USAGE
    assert run([]) == EXIT_USAGE
    code, rep, _ = _run(tmp_path, ["distance", "--domain", "disk", "--from", "0", "--to", "1.5"])
    assert code == EXIT_INVALID and rep["status"] == "invalid"
    code, _, _ = _run(tmp_path, ["distance", "--domain", '{"kind":"torus"}', "--from", "0",
                                 "--to", "0.5"])
    assert code == EXIT_INVALID
    code, rep, _ = _run(tmp_path, ["distance", "--domain", '{"kind":"example51","params":{"eps":0.9}}',
                                   "--from", "0,0.1i", "--to", "0,0.2i"])
    assert code == EXIT_INVALID
    assert run(["distance", "--from", "0"]) == EXIT_INVALID


def test_numerical_failure_exit(tmp_path):
    # a tiny kappa cannot be met on a generic domain: the bracket stays open
    code, rep, _ = _run(tmp_path, ["geodesic", "--domain", '{"kind":"example52"}',
                                   "--from", "0,0.1i", "--to", "0.05,0.12i", "--kappa", "1e-9",
                                   "--levels", "4,8"])
    assert code == EXIT_NUMERICAL
    assert rep["status"] == "numerical-failure" and rep["gap"] > 1e-9


def test_stdout_json_without_paths(capsys):
    code = run(["distance", "--domain", "disk", "--from", "0", "--to", "0.5"])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK and out["result"]["upper"] == pytest.approx(math.atanh(0.5))


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "kobageo.cli", "bogus"], capture_output=True)
    assert proc.returncode == EXIT_USAGE
