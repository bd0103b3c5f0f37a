import io
import json
import shutil
import subprocess
import sys

import pytest

from kmoduli import cli
from kmoduli.data import ENV_VAR, data_dir
from kmoduli.git_hm import LimitPair, StratumLabel
from kmoduli.toricdeform import VersalReport
from kmoduli.walls import ChamberDescriptor

Q_POLY = [["0", "0"], ["1", "0"], ["2", "3"], ["1", "3"]]
W8_INPUT = {"a": "1", "branch": "high", "beta1": ["0", "0", "0"], "f1": ["0", "0"], "g1": ["0", "0"], "h1": ["1", "0"]}


def run(argv, stdin=None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(stdin)))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def invoke(monkeypatch, capsys):
    def _invoke(argv, stdin=None):
        return run(argv, stdin, monkeypatch, capsys)

    return _invoke


def test_beta_examples(invoke):
    code, out, _ = invoke(["beta", "--profile", "E0_twisted_cubic", "--c", "9/13"])
    assert code == 0 and json.loads(out)["beta"] == "0"
    code, out, _ = invoke(["beta", "--profile", "ord_Q", "--c", "0"])
    assert json.loads(out)["beta"] == "1/2"
    code, out, _ = invoke(["beta", "--profile", "E0_twisted_cubic", "--threshold"])
    assert json.loads(out)["threshold"]["value"] == "9/13"


def test_walls_example(invoke):
    code, out, _ = invoke(["walls", "--a", "1/9", "--b", "1/2"])
    obj = json.loads(out)
    assert code == 0
    assert obj["chamber"]["model"] == "wall"
    assert obj["chamber"]["flip_centres"] == ["Z9", "W8"]
    assert ChamberDescriptor.from_json(obj["chamber"]).flip_centres == ("Z9", "W8")


def test_walls_tables(invoke):
    code, out, _ = invoke(["walls", "--tables"])
    obj = json.loads(out)
    assert obj["unmatched_c"] == ["9/13"]
    assert obj["boundary_coeffs"] == ["1/4", "9/8"]
    assert all(row["matched"] for row in obj["bridge"])


def test_shah_round_trip(invoke):
    code, out, _ = invoke(["shah"], stdin=W8_INPUT)
    label = StratumLabel.from_json(json.loads(out))
    assert (code, label.i, str(label.kst)) == (0, 8, "9/11")


def test_limit_from_shah_input(invoke):
    code, out, _ = invoke(["limit"], stdin={"shah": W8_INPUT, "weights": ["8", "2", "-4", "-6", "-5"]})
    lp = LimitPair.from_json(json.loads(out))
    assert lp.z_free and lp.z2_matched


def test_toric_deform_on_q(invoke):
    code, out, _ = invoke(["toric-deform"], stdin=Q_POLY)
    rep = VersalReport.from_json(json.loads(out)["versal"])
    assert code == 0 and rep.base_dimension == 1
    assert json.loads(out)["versal"]["relations_text"] == ["t1 - t3", "t2 - t4"]


def test_toric_deform_from_cone(invoke):
    omega_dual = {"cone": [[1, 0, 0], [0, 1, 0], [0, -1, 1], [-1, 0, 1]],
                  "basis": [["1", "-1", "0"], ["-2/3", "0", "1/3"], ["0", "1", "0"]]}
    code, out, _ = invoke(["toric-deform", "--K", "5"], stdin=omega_dual)
    obj = json.loads(out)
    assert sorted(obj["polygon"]) == sorted(Q_POLY)
    assert obj["versal"]["verified_up_to"] == 5


def test_toric_deform_obstruction_is_a_result(invoke):
    hexagon = [[0, 0], [1, 0], [2, 1], [2, 2], [1, 2], [0, 1]]
    code, out, _ = invoke(["toric-deform"], stdin=hexagon)
    assert code == 0 and json.loads(out)["versal"]["obstruction_degree"] == 2


def test_weierstrass_command(invoke):
    pair = {"A": ["1"] + ["0"] * 8, "B": ["1"] + ["0"] * 12, "hm": {"r": 1, "shift": ["0", "1"]}}
    code, out, _ = invoke(["weierstrass"], stdin=pair)
    obj = json.loads(out)
    assert obj["discriminant"][0] == "31" and obj["discriminant_degree"] == 24
    assert obj["slc"] is False and obj["witness_point"] == ["0", "1"]


def test_integrate_command(invoke):
    P = {"breakpoints": ["0", "1/2"], "pieces": [["1", "-6", "12", "-8"]]}
    code, out, _ = invoke(["integrate"], stdin=P)
    assert json.loads(out) == {"integral": "1/8"}


def test_tables_default_is_clean(invoke):
    code, out, _ = invoke(["tables", "--format", "json"])
    obj = json.loads(out)
    assert code == 0 and "diff" not in obj
    row = obj["table1"][0]
    assert row["provenance"]["kst"] == "kst_threshold(ord_Q)"
    assert obj["table2"][0]["provenance"]["kst"] == "(1+2t)/(3-2t)"


def test_tables_slope_override_is_caught(invoke):
    code, out, _ = invoke(["tables", "--slope", "1=1/7"])
    diff = json.loads(out)["diff"]
    assert code == 1
    assert {(d["table"], d["i"], d["field"]) for d in diff} == {
        ("table1", 1, "kst"), ("table2", 1, "kst"), ("table2", 1, "t")}


def test_tables_perturbed_ledger_is_caught(invoke, tmp_path, monkeypatch):
    perturbed = tmp_path / "data"
    shutil.copytree(data_dir(), perturbed)
    ledger = json.loads((perturbed / "ledger.json").read_text())
    ledger["table2"][0]["t"] = "1/7"
    (perturbed / "ledger.json").write_text(json.dumps(ledger))
    monkeypatch.setenv(ENV_VAR, str(perturbed))
    code, out, _ = invoke(["tables"])
    assert code == 1
    assert {d["i"] for d in json.loads(out)["diff"]} == {1}


def test_markdown_format(invoke):
    code, out, _ = invoke(["tables", "--format", "markdown"])
    assert out.startswith("## tables")
    assert "| 9/11 |" in out


def test_output_is_byte_stable(invoke):
    first = invoke(["walls", "--tables"])[1]
    second = invoke(["walls", "--tables"])[1]
    assert first == second
    assert first.endswith("\n")


def test_input_and_output_files(invoke, tmp_path):
    src, dst = tmp_path / "in.json", tmp_path / "out.json"
    src.write_text(json.dumps(W8_INPUT))
    code, out, _ = invoke(["shah", "--input", str(src), "--output", str(dst)])
    assert code == 0 and out == ""
    assert json.loads(dst.read_text())["i"] == 8


@pytest.mark.parametrize(
    "argv, stdin",
    [
        (["shah"], {"a": "1"}),
        (["shah"], {"a": 1.5, "branch": "high"}),
        (["beta", "--profile", "nope", "--c", "0"], None),
        (["beta", "--profile", "ord_Q"], None),
        (["walls", "--a", "1/2"], None),
        (["toric-deform"], {"cone": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                            "basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}),
        (["weierstrass"], {"A": ["0"] * 9, "B": ["0"] * 13}),
    ],
)
def test_input_errors_are_structured(invoke, argv, stdin):
    code, out, err = invoke(argv, stdin=stdin)
    assert code == 2 and out == ""
    assert "message" in json.loads(err)["error"]


def test_malformed_json(invoke, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("not json"))
    code, _, err = invoke(["shah"])
    assert code == 2 and "not valid JSON" in json.loads(err)["error"]["message"]


def test_unknown_command_is_a_usage_error(invoke):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code != 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kmoduli", "tables"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
