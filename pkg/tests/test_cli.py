import csv
import io
import json
import logging
import math
import os
from pathlib import Path

import pytest

from app.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, parse_flags, run
from app.core.errors import DomainError
from app.modules.scan.service import parse_csv_rows

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_SWEEP = GOLDEN_DIR / "sweep_three_alphas.csv"
GOLDEN_ARGV = [
    "sweep", "--alpha", "0,0.25pi,0.4pi", "--tau-min", "0", "--tau-max", "3.14159",
    "--steps", "64", "--format", "csv",
]


@pytest.fixture(autouse=True)
def drop_cli_log_handler():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_lgi_pt", False):
            root.removeHandler(handler)


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ==================== EXAMPLES ====================

def test_corr_at_tsirelson_point(capsys):
    code, out, err = invoke(capsys, "corr", "--alpha", "0", "--tau", "0.5235987755982988")
    assert code == EXIT_OK
    rows = parse_csv_rows(out)
    assert len(rows) == 1
    assert rows[0].k3 == pytest.approx(1.5, abs=1e-12)


def test_quarter_point(capsys):
    code, out, _ = invoke(capsys, "quarter", "--alpha", "0.7853981633974483")
    assert code == EXIT_OK
    (row,) = parse_csv_rows(out)
    assert row.tau == math.pi / 4
    assert row.c31 == pytest.approx(-1.0, abs=1e-12)
    assert row.k3 == pytest.approx(2.1666666666666665, abs=1e-9)


def test_verify_passes(capsys):
    code, out, _ = invoke(capsys, "verify", "--samples", "10000", "--seed", "7", "--tol", "1e-9")
    assert code == EXIT_OK
    records = list(csv.DictReader(io.StringIO(out)))
    assert [r["variant"] for r in records] == ["as-printed", "repaired"]
    repaired = records[1]
    assert float(repaired["max_abs_deviation"]) <= 1e-9
    assert int(repaired["samples"]) == 10000


def test_verify_reports_failure(capsys):
    code, out, err = invoke(capsys, "verify", "--samples", "50", "--tol", "1e-30")
    assert code == EXIT_RUNTIME
    assert "repaired closed form deviates" in err
    assert out.startswith("variant,")


def test_eigen_json(capsys):
    code, out, _ = invoke(capsys, "eigen", "--alpha", "0.25pi", "--format", "json")
    assert code == EXIT_OK
    (record,) = json.loads(out)
    assert record["alpha"] == math.pi / 4
    assert record["e_plus"] == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert record["e_minus"] == pytest.approx(-math.sqrt(0.5), abs=1e-12)
    assert record["overlap"] == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_k3max(capsys):
    code, out, _ = invoke(capsys, "k3max", "--alpha", "0")
    assert code == EXIT_OK
    (record,) = list(csv.DictReader(io.StringIO(out)))
    assert float(record["k3_max"]) == pytest.approx(1.5, abs=1e-12)
    assert float(record["tau_min_arg"]) == pytest.approx(math.pi / 6, abs=1e-6)


def test_sweep_json_keys(capsys):
    code, out, _ = invoke(capsys, "sweep", "--alpha", "0.1", "--tau-min", "0.1", "--tau-max", "1", "--steps", "4",
                          "--format", "json")
    assert code == EXIT_OK
    records = json.loads(out)
    assert len(records) == 4
    assert list(records[0]) == ["alpha", "tau", "c21", "c32", "c31", "k3"]


# ==================== FLAGS ====================

def test_pi_suffixed_alpha():
    command = parse_flags(["corr", "--alpha", "0.25pi", "--tau", "1"])
    assert command.name == "corr"
    assert command.args.alpha == [math.pi / 4]


def test_comma_separated_alphas():
    command = parse_flags(["quarter", "--alpha", "0,0.1, 0.2pi"])
    assert command.args.alpha == [0.0, 0.1, 0.2 * math.pi]


def test_exceptional_point_is_rejected():
    with pytest.raises(DomainError):
        parse_flags(["corr", "--alpha", "0.5pi", "--tau", "1"])


@pytest.mark.parametrize(
    "argv",
    [
        ["corr", "--alpha", "0.5pi", "--tau", "1"],
        ["sweep", "--alpha", "0.1", "--steps", "1"],
        ["sweep", "--alpha", "0.1", "--tau-min", "2", "--tau-max", "1"],
        ["sweep", "--alpha", "0.1", "--bogus"],
        ["sweep"],
        [],
        ["corr", "--alpha", "0.1", "--tau", "0"],
        ["corr", "--alpha", "abc", "--tau", "1"],
        ["k3max", "--alpha", "0.1", "--tol", "0"],
        ["verify", "--samples", "0"],
        ["eigen", "--alpha", "0.1", "--s", "0"],
        ["eigen", "--alpha", "0.1", "--ep-guard", "0.6"],
        ["--log-level", "LOUD", "eigen", "--alpha", "0.1"],
        ["sweep", "--alpha", "0.1", "--format", "xml"],
    ],
)
def test_bad_flags_exit_with_usage_code(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == EXIT_USAGE
    assert out == ""
    assert "error" in err


# ==================== OUTPUT ====================

def test_output_is_byte_identical(capsys):
    argv = ["sweep", "--alpha", "0,0.3", "--steps", "16"]
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second
    assert first.count("\n") == 1 + 2 * 16


def test_out_file_matches_stdout(capsys, tmp_path):
    argv = ["quarter", "--alpha", "0,0.25pi"]
    _, stdout_text, _ = invoke(capsys, *argv)
    path = tmp_path / "quarter.csv"
    code, out, _ = invoke(capsys, *argv, "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert path.read_text(encoding="utf-8") == stdout_text


def test_out_directory_is_runtime_error(capsys, tmp_path):
    code, out, err = invoke(capsys, "quarter", "--alpha", "0", "--out", str(tmp_path))
    assert code == EXIT_RUNTIME
    assert out == ""
    assert "Failed to write" in err


def test_sweep_error_rows_go_to_stderr(capsys):
    code, out, err = invoke(capsys, "sweep", "--alpha", "0", "--steps", "3")
    assert code == EXIT_OK
    assert out.split("\n")[1] == "0,0,,,,"
    assert "tau must be > 0" in err


def test_golden_sweep(capsys):
    code, first, _ = invoke(capsys, *GOLDEN_ARGV)
    assert code == EXIT_OK
    _, second, _ = invoke(capsys, *GOLDEN_ARGV)
    assert first == second

    if os.environ.get("LGI_PT_UPDATE_GOLDEN") == "1":
        GOLDEN_DIR.mkdir(exist_ok=True)
        GOLDEN_SWEEP.write_bytes(first.encode("utf-8"))
    assert GOLDEN_SWEEP.exists(), f"missing golden table {GOLDEN_SWEEP}"

    expected = list(csv.reader(io.StringIO(GOLDEN_SWEEP.read_text(encoding="utf-8"))))
    actual = list(csv.reader(io.StringIO(first)))
    assert actual[0] == expected[0] == ["alpha", "tau", "c21", "c32", "c31", "k3"]
    assert len(actual) == len(expected) == 1 + 3 * 64
    for got, want in zip(actual[1:], expected[1:]):
        assert len(got) == len(want)
        for got_cell, want_cell in zip(got, want):
            if want_cell == "":
                assert got_cell == ""
            else:
                assert float(got_cell) == pytest.approx(float(want_cell), abs=1e-12)


def test_golden_sweep_rows_start_each_alpha_at_tau_zero():
    lines = GOLDEN_SWEEP.read_text(encoding="utf-8").splitlines()
    blanks = [line for line in lines[1:] if line.endswith(",,,,")]
    assert [line.split(",")[0] for line in blanks] == ["0", "0.78539816339744828", "1.2566370614359172"]
    assert all(line.split(",")[1] == "0" for line in blanks)
