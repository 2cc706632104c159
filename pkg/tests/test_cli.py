"""CLI surface: JSON schema conformance, determinism, exit codes."""

import io
import json
from importlib import resources

import jsonschema
import pytest

from covermeasure import cli


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def load_schema():
    text = resources.files("covermeasure").joinpath("output.schema.json").read_text()
    return json.loads(text)


SCHEMA = load_schema()

SMOKE_COMMANDS = [
    ["graphs", "enumerate", "--rank", "2"],
    ["graphs", "enumerate", "--rank", "3"],
    ["measure", "weights", "--rank", "2"],
    ["measure", "lattice", "--graph", "theta", "--N", "5"],
    ["expect", "--rank", "2", "--functional", "systole", "--method", "exact"],
    ["expect", "--rank", "2", "--functional", "bridge", "--method", "mc",
     "--samples", "2000", "--seed", "1"],
    ["sample", "--rank", "2", "--count", "3", "--seed", "4"],
    ["invariant", "systole", "--graph", "dumbbell", "--lengths", "1/2,3/10,1/5"],
    ["invariant", "minedge", "--graph", "theta", "--lengths", "0.2,0.3,0.5"],
    ["pants", "ortho", "--boundaries", "1,1,10"],
    ["pants", "ortho", "--boundaries", "1,1,10", "--oracle"],
    ["count", "subgroups", "--genus", "2", "--rank", "2", "--L", "12"],
    ["count", "subgroups", "--genus", "2", "--rank", "2", "--L", "12",
     "--precision", "high"],
    ["count", "crit", "--graph", "dumbbell", "--genus", "2", "--L", "12"],
    ["ps", "model", "--genus", "2", "--rank", "2", "--s", "1.2"],
    ["ps", "converge", "--rank", "2", "--genus", "2", "--Lmax", "10",
     "--seed", "0", "--s-list", "1.5,1.02", "--cap", "400"],
]


@pytest.mark.parametrize("argv", SMOKE_COMMANDS, ids=lambda a: " ".join(a))
def test_json_output_validates_against_schema(argv):
    code, out, err = run_cli(argv)
    assert code == 0, err
    envelope = json.loads(out)
    jsonschema.validate(envelope, SCHEMA)
    assert envelope["records"]


def test_ps_sum_command(tmp_path):
    path = tmp_path / "lengths.txt"
    path.write_text("1.0\n2.0\n3.0\n")
    code, out, _ = run_cli(["ps", "sum", "--lengths-file", str(path),
                            "--s", "2.0", "--L", "10"])
    assert code == 0
    envelope = json.loads(out)
    jsonschema.validate(envelope, SCHEMA)
    rec = envelope["records"][0]
    assert rec["n_lengths"] == 3
    assert abs(rec["partial_sum"] - rec["stieltjes"]) < 1e-14


def test_expect_exact_systole_value():
    code, out, _ = run_cli(["expect", "--rank", "2", "--functional",
                            "systole", "--method", "exact"])
    assert code == 0
    rec = json.loads(out)["records"][0]
    assert rec["exact_numerator"] == 23
    assert rec["exact_denominator"] == 90


def test_measure_weights_values():
    code, out, _ = run_cli(["measure", "weights", "--rank", "2"])
    assert code == 0
    envelope = json.loads(out)
    weights = {r.get("name", r["graph_id"]):
               (r["exact_numerator"], r["exact_denominator"])
               for r in envelope["records"]}
    assert weights["dumbbell"] == (3, 5)
    assert weights["theta"] == (2, 5)
    assert envelope["params"]["normalization_numerator"] == 24
    assert envelope["params"]["normalization_denominator"] == 5


def test_graphs_enumerate_rank2_two_records():
    code, out, _ = run_cli(["graphs", "enumerate", "--rank", "2"])
    assert code == 0
    records = json.loads(out)["records"]
    assert len(records) == 2
    stats = {(r["aut_order"], r["triv_order"]) for r in records}
    assert stats == {(8, 4), (12, 2)}


def test_byte_identical_reruns():
    for argv in (
        ["sample", "--rank", "2", "--count", "5", "--seed", "7"],
        ["expect", "--rank", "2", "--functional", "systole", "--method",
         "mc", "--samples", "5000", "--seed", "3"],
        ["ps", "converge", "--rank", "2", "--genus", "2", "--Lmax", "9",
         "--seed", "2", "--s-list", "1.4,1.1", "--cap", "300"],
    ):
        _, first, _ = run_cli(argv)
        _, second, _ = run_cli(argv)
        assert first == second


def test_seed_changes_samples():
    _, a, _ = run_cli(["sample", "--rank", "2", "--count", "3", "--seed", "1"])
    _, b, _ = run_cli(["sample", "--rank", "2", "--count", "3", "--seed", "2"])
    assert a != b


def test_text_and_csv_formats():
    code, out, _ = run_cli(["graphs", "enumerate", "--rank", "2",
                            "--format", "text"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert all(line.startswith("rank=2; vertices=2; edges:") for line in lines)
    code, out, _ = run_cli(["measure", "weights", "--rank", "2",
                            "--format", "csv"])
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0].startswith("graph_id,")
    assert len(rows) == 3


def test_usage_errors_exit_2():
    code, _, _ = run_cli(["bogus"])
    assert code == 2
    code, _, _ = run_cli(["expect", "--rank", "2", "--functional", "girth"])
    assert code == 2
    code, _, _ = run_cli([])
    assert code == 2


def test_computation_errors_exit_1():
    code, _, err = run_cli(["ps", "model", "--genus", "2", "--rank", "2",
                            "--s", "0.9"])
    assert code == 1
    assert "diverges" in err
    code, _, err = run_cli(["graphs", "enumerate", "--rank", "1"])
    assert code == 1
    code, _, err = run_cli(["invariant", "systole", "--graph", "theta",
                            "--lengths", "1,2"])
    assert code == 1
    code, _, err = run_cli(["ps", "sum", "--lengths-file",
                            "/nonexistent/file.txt", "--s", "1.5"])
    assert code == 1


def test_rank_cap_env_respected(monkeypatch):
    monkeypatch.setenv("COVERMEASURE_MAX_RANK", "2")
    code, _, err = run_cli(["graphs", "enumerate", "--rank", "3"])
    assert code == 1
    assert "COVERMEASURE_MAX_RANK" in err


def test_invariant_bridge_boolean():
    _, out, _ = run_cli(["invariant", "bridge", "--graph", "dumbbell",
                         "--lengths", "1/3,1/3,1/3"])
    rec = json.loads(out)["records"][0]
    assert rec["value"] == 1.0
    _, out, _ = run_cli(["invariant", "bridge", "--graph", "theta",
                         "--lengths", "1/3,1/3,1/3"])
    assert json.loads(out)["records"][0]["value"] == 0.0
