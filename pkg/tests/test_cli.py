import json

from nbsc.cli import parse_int_range, run
from nbsc.report import COLUMNS, emit
from nbsc.threshold_search import ThresholdResult


def _run(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = run(args + ["--output", str(out)])
    return code, out.read_text() if out.exists() else None


def test_parse_int_range():
    assert parse_int_range("1..4") == [1, 2, 3, 4]
    assert parse_int_range("1,3,5") == [1, 3, 5]


def test_empty_sweep_has_header_only():
    assert emit([]) == ",".join(COLUMNS) + "\n"
    assert json.loads(emit([], "json")) == []


def test_json_carries_error_only_when_set():
    ok = ThresholdResult("B24", 1, "bec", "fs", None, 0.3333)
    bad = ThresholdResult("B24", 1, "bec", "wd", 5, None, error="boom")
    rows = json.loads(emit([ok, bad], "json"))
    assert "error" not in rows[0] and rows[1]["error"] == "boom"


def test_bec_sweep_byte_identical(tmp_path):
    args = ["sweep", "--channel", "bec", "--ensembles", "B24,C36ms1", "--m", "1..2",
            "--schedules", "fs,wd:4", "--L", "10", "--tol", "1e-2", "--workers", "1"]
    c1, a = _run(args, tmp_path, "a.csv")
    c2, b = _run(args, tmp_path, "b.csv")
    assert c1 == c2 == 0 and a == b
    assert a.splitlines()[0] == ",".join(COLUMNS)
    assert len(a.splitlines()) == 1 + 8


def test_awgn_requires_seed(tmp_path):
    code, _ = _run(["awgn-threshold", "--ensemble", "B36", "--m", "1"], tmp_path)
    assert code == 2


def test_unknown_ensemble_is_config_error(tmp_path):
    code, _ = _run(["bec-threshold", "--ensemble", "nope", "--m", "1"], tmp_path)
    assert code == 2


def test_complexity_command(tmp_path):
    code, text = _run(["complexity", "--dv", "3", "--c", "2", "--window", "10", "--m", "4", "--M", "50"], tmp_path)
    assert code == 0
    head, row = text.splitlines()
    assert dict(zip(head.split(","), row.split(",")))["order"] == str(10 * 2 * 3 * (16 + 64))


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("NBSC_OUTPUT_DIR", str(tmp_path / "reports"))
    assert run(["dump-kernels", "--m", "2"]) == 0
    data = json.loads((tmp_path / "reports" / "dump-kernels.json").read_text())
    assert data["m"] == 2


def test_bad_output_path(tmp_path):
    code = run(["dump-kernels", "--m", "1", "--output", str(tmp_path / "missing" / "x.json")])
    assert code == 3
