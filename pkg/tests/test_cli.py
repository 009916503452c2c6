import io
import json
import subprocess
import sys

import pytest

from minkowski_arrangements.cli import SCHEMA_VERSION, run
from minkowski_arrangements.extremal_search import cube_arrangement
from minkowski_arrangements.arrangement import Arrangement
from minkowski_arrangements.bodies import cube


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    lines = out.getvalue().splitlines()
    return code, [json.loads(line) for line in lines]


@pytest.fixture
def cube9(tmp_path):
    path = tmp_path / "cube9.json"
    path.write_text(json.dumps(cube_arrangement(2).to_dict()))
    return str(path)


def test_bound_halpha_prints_eighteen():
    code, [record] = call("bound", "--formula", "halpha", "--alpha", "1", "--D", "3")
    assert code == 0
    assert record["payload"]["value"] == 18
    assert record["schema_version"] == SCHEMA_VERSION


def test_bound_minkowski_and_sequence():
    assert call("bound", "--formula", "minkowski", "--d", "4")[1][0]["payload"]["value"] == 162
    code, [record] = call("bound", "--formula", "sequence", "--d", "2")
    assert code == 0 and record["payload"]["parameters"]["N"] == 3


def test_verify_size_pipeline_on_cube9(cube9):
    code, [record] = call("verify", "--theorem", "1", "--input", cube9)
    assert code == 0
    assert record["payload"]["predicate"] == "theorem1_pipeline" and record["payload"]["pass"]


def test_verify_fails_with_exit_one(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(Arrangement(cube(2), [((0, 0), 2), ((1, 0), 1)]).to_dict()))
    code, [record] = call("verify", "--theorem", "1", "--input", str(path))
    assert code == 1 and record["status"] == "fail"
    code, [record] = call("lift", "--input", str(path))
    assert code == 1 and record["payload"]["error"] == "HypothesisViolated"


def test_lift_then_equiv_round_trip(cube9, tmp_path):
    code, [record] = call("lift", "--input", cube9)
    assert code == 0
    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps(record["payload"]))
    code, [record] = call("equiv", "--direction", "points-to-packing", "--input", str(cert), "--lambda", "2")
    assert code == 0
    packing = record["payload"]
    packing.pop("report")
    path = tmp_path / "packing.json"
    path.write_text(json.dumps(packing))
    code, [record] = call("equiv", "--direction", "packing-to-points", "--input", str(path))
    assert code == 0 and len(record["payload"]["points"]) == 9


def test_verify_sequence_pipeline_inline_json():
    arr = Arrangement(cube(1), [((0,), 1), ((1,), 2), ((-1,), 1)])
    code, [record] = call("verify", "--theorem", "2", "--N", "2", "--input", json.dumps(arr.to_dict()))
    assert code == 0 and record["payload"]["details"]["classes"] == [[0], [], [1, 2]]


def test_malformed_json_is_an_input_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, [record] = call("lift", "--input", str(path))
    assert code == 2 and record["status"] == "input_error"


def test_missing_fields_are_input_errors():
    code, _ = call("lift", "--input", json.dumps({"body": {"kind": "pball", "p": "inf", "dim": 2}}))
    assert code == 2
    code, _ = call("bound", "--formula", "halpha", "--D", "3")
    assert code == 2


def test_unknown_flag_exits_two_with_usage(capsys):
    assert run(["bound", "--formula", "halpha", "--frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run(["nonsense"]) == 2


def test_payloads_are_deterministic(tmp_path):
    args = ["volcheck", "--config", None, "--direction", "1,-1,0", "--method", "mc", "--samples", "20000", "--seed", "5"]
    _, [sharp] = call("extremal", "--config", "sharpness", "--D", "3")
    path = tmp_path / "sharp.json"
    path.write_text(json.dumps(sharp["payload"]["config"]))
    args[2] = str(path)
    first = call(*args)[1][0]
    second = call(*args)[1][0]
    assert json.dumps(first["payload"], sort_keys=True) == json.dumps(second["payload"], sort_keys=True)
    assert first["payload"]["pass"]


def test_search_and_extremal_subcommands():
    code, [record] = call("search", "--d", "2", "--grid=-1:1:1/2", "--ratios", "1/2,1")
    assert code == 0 and record["payload"]["size"] == 9 or record["payload"]["size"] >= 9
    code, [record] = call("extremal", "--config", "interval")
    assert code == 0 and record["payload"]["details"]["closed_max"] == 3
    code, [record] = call("extremal", "--config", "cube", "--d", "2")
    assert code == 0 and record["payload"]["size"] == 9


def test_float_mode_and_output_file(tmp_path, cube9):
    out = tmp_path / "runs.jsonl"
    code = run(["verify", "--theorem", "1", "--input", cube9, "--numeric", "float", "--output", str(out)])
    code2 = run(["bound", "--formula", "minkowski", "--d", "1", "--output", str(out)])
    lines = out.read_text().splitlines()
    assert (code, code2) == (0, 0) and len(lines) == 2
    assert json.loads(lines[0])["numeric"] == "float"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "minkowski_arrangements", "bound", "--formula", "halpha", "--alpha", "1", "--D", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["value"] == 6
