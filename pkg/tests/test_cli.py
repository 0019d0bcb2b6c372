import json
import subprocess
import sys

import pytest

from kazhdanw import cli
from kazhdanw.liealg import algebra_to_json, catalog


def run(capsys, *argv):
    code = cli.main(list(argv) + ["--format", "machine"])
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def corrupted_sl3(tmp_path):
    """sl3 with one wrong constant that still admits the minimal polarization."""
    alg, triples = catalog("sl3")
    doc = algebra_to_json(alg, triples)
    i, j = alg.index("E21"), alg.index("E32")
    doc["brackets"].append({"i": i, "j": j, "terms": [{"k": i, "num": 1, "den": 1}]})
    path = tmp_path / "sl3_bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_operator_eval_first_order(capsys):
    code, rep = run(capsys, "operator", "eval", "--graph", "fig2", "--F", "e", "--algebra", "sl2")
    assert code == 0
    assert rep["result"]["value"] == {"f*": "h"}
    assert rep["exact"] is True and rep["pass"] is True


def test_operator_eval_two_point(capsys):
    code, rep = run(capsys, "operator", "eval", "--graph", "1/FG; [(1,F,*),(1,G,*)]", "--F", "e", "--G", "f")
    assert code == 0 and rep["result"]["value"] == "h"


def test_operator_eval_two_point_needs_G(capsys):
    code, rep = run(capsys, "operator", "eval", "--graph", "fig3", "--F", "e")
    assert code == 2 and rep["error"]["kind"] == "usage"


def test_enumerate_wheels(capsys):
    code, rep = run(capsys, "graphs", "enumerate", "--family", "wheel", "--size", "3")
    assert code == 0
    assert rep["result"]["count"] == 1
    assert rep["result"]["graphs"][0]["class"] == "W(3)"
    code, rep = run(capsys, "graphs", "enumerate", "--family", "wheel", "--size", "3", "--edge-orders")
    assert rep["result"]["count"] == 4


def test_enumerate_bad_size(capsys):
    code, rep = run(capsys, "graphs", "enumerate", "--family", "bw", "--size", "2")
    assert code == 3 and rep["error"]["kind"] == "input"


def test_kernel_and_oracle_share_record_shape(capsys):
    _, kernel = run(capsys, "reduction", "kernel", "--max-deg", "8")
    _, oracle = run(capsys, "walgebra", "oracle", "--max-level", "8")
    assert kernel["result"]["dimensions"] == oracle["result"]["dimensions"] == [1, 0, 0, 0, 1, 0, 0, 0, 1]
    assert set(kernel["result"]) == set(oracle["result"]) == {"dimensions", "basis"}


@pytest.mark.parametrize("algebra", ["sl2", "sl3"])
def test_compare_rows_equal(capsys, algebra):
    code, rep = run(capsys, "compare", "--algebra", algebra, "--max-deg", "8")
    assert code == 0
    assert len(rep["result"]["rows"]) == 9
    assert all(r["equal"] for r in rep["result"]["rows"])


def test_compare_cap_zero(capsys):
    code, rep = run(capsys, "compare", "--max-deg", "0")
    assert rep["result"]["rows"] == [{"degree": 0, "kernel": 1, "oracle": 1, "equal": True}]


def test_verify_bernoulli_on_sl2(capsys):
    code, rep = run(capsys, "verify", "2.3", "--samples", "5")
    assert code == 0 and rep["result"]["suite"] == "bernoulli"


def test_verify_two_point_includes_labeled_chain(capsys):
    code, rep = run(capsys, "verify", "2.8", "--algebra", "sl3", "--max-n", "2")
    assert code == 0
    assert [r["suite"] for r in rep["result"]["runs"]] == ["two-point", "labeled-chain"]


@pytest.mark.parametrize(
    "suite", ["homogenize", "wheel-weights", "exterior-wheels", "exterior-bernoulli", "rho", "gutt", "duflo"]
)
def test_other_suites_pass(capsys, suite):
    code, rep = run(capsys, "verify", suite, "--samples", "3")
    assert code == 0, rep


def test_numeric_suite_aliases(capsys):
    for alias in ("2.6-structure", "remark-2.9", "eq-13", "eq-14"):
        code, rep = run(capsys, "verify", alias, "--samples", "3")
        assert code == 0
        assert rep["result"]["suite"] == cli.VERIFY_IDS[alias]


def test_descriptive_graph_names(capsys):
    _, named = run(capsys, "operator", "eval", "--graph", "first-order", "--F", "e*h")
    _, legacy = run(capsys, "operator", "eval", "--graph", "fig2", "--F", "e*h")
    assert named["result"] == legacy["result"]


def test_verify_corrupted_table_reports_labeling(capsys, corrupted_sl3):
    code, rep = run(capsys, "verify", "2.4", "--algebra-file", str(corrupted_sl3),
                    "--nilpotent", "minimal", "--samples", "5")
    assert code == 1 and rep["pass"] is False
    failure = rep["result"]["runs"][0]["failures"][0]
    assert failure["observed"] != failure["predicted"]
    assert len(failure["labels"]) == 4


def test_corrupted_table_fails_jacobi(capsys, corrupted_sl3):
    code, rep = run(capsys, "algebra", "check", "--algebra-file", str(corrupted_sl3))
    assert code == 1
    assert rep["result"]["jacobi"]["pass"] is False


def test_unknown_suite_is_usage_error(capsys):
    code, rep = run(capsys, "verify", "9.9")
    assert code == 2
    assert rep["error"]["kind"] == "usage" and "9.9" in rep["error"]["message"]


def test_bad_flag_is_usage_error(capsys):
    code, rep = run(capsys, "compare", "--affine-sign", "sideways")
    assert code == 2 and rep["pass"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["compare", "--algebra", "e8"],
        ["compare", "--algebra-file", "/nonexistent/file.json"],
        ["compare", "--nilpotent", "subregular"],
        ["compare", "--nilpotent", "{not json"],
        ["compare", "--max-deg", "-1"],
        ["operator", "eval", "--graph", "fig2", "--F", "e +"],
        ["operator", "eval", "--graph", "fig2", "--F", "f"],
    ],
)
def test_input_errors(capsys, argv):
    code, rep = run(capsys, *argv)
    assert code == 3
    assert rep["error"]["kind"] == "input" and rep["error"]["message"]


def test_invalid_json_algebra(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    code, rep = run(capsys, "algebra", "check", "--algebra-file", str(bad))
    assert code == 3


def test_internal_errors_become_records(capsys, monkeypatch):
    def boom(args, cfg):
        raise RuntimeError("kaput")

    monkeypatch.setitem(cli.COMMANDS, ("compare", None), boom)
    code, rep = run(capsys, "compare")
    assert code == 1
    assert rep["error"] == {"kind": "internal", "message": "RuntimeError: kaput"}


def test_explicit_triple(capsys):
    alg, triples = catalog("sl2")
    t = triples["principal"]
    doc = {p: [{"num": c.numerator, "den": c.denominator} for c in getattr(t, p)] for p in "ehf"}
    code, rep = run(capsys, "polarize", "--nilpotent", json.dumps(doc))
    assert code == 0
    assert rep["result"]["m"] == ["f"] and rep["result"]["chi"] == {"f": "1"}


def test_polarize_minimal(capsys):
    code, rep = run(capsys, "polarize", "--algebra", "sl3", "--nilpotent", "minimal")
    assert code == 0
    assert rep["result"]["s"] == 1 and rep["result"]["violations"] == []
    assert set(rep["result"]["trace_ad_m"].values()) == {"0"}


def test_config_precedence(capsys, tmp_path):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"max_deg": 4, "algebra": "sl3"}), encoding="utf-8")
    _, rep = run(capsys, "reduction", "kernel", "--config", str(conf))
    assert rep["config"]["max_deg"] == 4 and rep["config"]["algebra"] == "sl3"
    _, rep = run(capsys, "reduction", "kernel", "--config", str(conf), "--max-deg", "2")
    assert rep["config"]["max_deg"] == 2 and rep["config"]["algebra"] == "sl3"
    assert rep["result"]["dimensions"] == [1, 0, 0]
    _, rep = run(capsys, "reduction", "kernel")
    assert rep["config"]["max_deg"] == 8


def test_config_rejects_unknown_key(capsys, tmp_path):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"colour": "blue"}), encoding="utf-8")
    code, rep = run(capsys, "compare", "--config", str(conf))
    assert code == 3 and "colour" in rep["error"]["message"]


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code = cli.main(["compare", "--max-deg", "4", "--format", "machine", "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["pass"] is True


def test_text_format(capsys):
    code = cli.main(["reduction", "kernel", "--max-deg", "4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "dimensions: [1, 0, 0, 0, 1]" in out
    assert "e - 1/4*h^2" in out


def test_compare_is_byte_stable(tmp_path):
    outputs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        cli.main(["compare", "--algebra", "sl3", "--max-deg", "6", "--format", "machine", "--out", str(path)])
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kazhdanw", "compare", "--max-deg", "4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "pass: true" in proc.stdout
