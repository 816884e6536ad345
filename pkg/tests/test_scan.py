import io
import json
import math

import pytest
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import DomainError, ExportError
from app.modules.correlations.service import k3, k3_quarter_tau
from app.modules.scan.schemas import QUARTER_TAU, ExtremumRecord, ScanRow, SweepConfig, TableFormat
from app.modules.scan.service import (
    correlations_at_quarter_tau,
    export_table,
    format_number,
    golden_section_max,
    k3_max,
    parallel_map,
    parse_csv_rows,
    parse_json_rows,
    render_table,
    sweep_k3,
    tau_grid,
    tau_min_curve,
)
from tests.conftest import ALPHA_GRID

HEADER = "alpha,tau,c21,c32,c31,k3\n"


# ==================== SWEEP ====================

def test_tau_grid_includes_endpoints():
    grid = tau_grid(0.0, math.pi, 7)
    assert len(grid) == 7
    assert grid[0] == 0.0
    assert grid[-1] == math.pi


def test_sweep_unitary_limit():
    rows = sweep_k3(SweepConfig(alphas=[0.0], tau_steps=7))
    assert [row.tau for row in rows] == tau_grid(0.0, math.pi, 7)

    # tau = 0 collapses every measurement time onto t = 0
    assert rows[0].k3 is None
    assert rows[0].error

    assert rows[1].k3 == pytest.approx(1.5, abs=1e-9)
    assert rows[3].k3 == pytest.approx(-3.0, abs=1e-9)
    for row in rows[1:]:
        assert row.error is None
        assert row.k3 == pytest.approx(2 * math.cos(2 * row.tau) - math.cos(4 * row.tau), abs=1e-9)


def test_sweep_close_to_exceptional_point_has_no_failed_points():
    rows = sweep_k3(SweepConfig(alphas=[0.4998 * math.pi], tau_steps=5))
    assert rows[0].error
    for row in rows[1:]:
        assert row.error is None
        assert -3.0 - 1e-9 <= row.k3 <= 3.0 + 1e-9


def test_dense_unitary_sweep():
    rows = sweep_k3(SweepConfig(alphas=[0.0], tau_steps=2048))
    valid = [row for row in rows if row.error is None]
    assert len(valid) == 2047
    for row in valid:
        assert abs(row.k3 - (2 * math.cos(2 * row.tau) - math.cos(4 * row.tau))) < 1e-10

    # K3 peaks at both pi/6 and 5pi/6; look at the first half only
    first_half = [row for row in valid if row.tau < math.pi / 2]
    peak = max(first_half, key=lambda row: row.k3)
    step = math.pi / 2047
    assert peak.k3 == pytest.approx(1.5, abs=1e-6)
    assert abs(peak.tau - math.pi / 6) <= step


def test_sweep_orders_alpha_then_tau():
    config = SweepConfig(alphas=[0.3, 0.0, QUARTER_TAU], tau_min=0.1, tau_max=1.0, tau_steps=5)
    rows = sweep_k3(config)
    assert len(rows) == 15
    taus = tau_grid(0.1, 1.0, 5)
    assert [(row.alpha, row.tau) for row in rows] == [(a, t) for a in config.alphas for t in taus]


def test_sweep_matches_pointwise_k3():
    rows = sweep_k3(SweepConfig(alphas=[QUARTER_TAU], tau_min=QUARTER_TAU, tau_max=1.5, tau_steps=3))
    assert rows[0].k3 == pytest.approx(13 / 6, abs=1e-9)
    for row in rows:
        expected = k3(row.alpha, row.tau)
        assert (row.c21, row.c32, row.c31, row.k3) == (expected.c21, expected.c32, expected.c31, expected.k3)


def test_sweep_is_deterministic_across_worker_counts(monkeypatch):
    config = SweepConfig(alphas=[0.2, 1.1], tau_steps=33)
    threaded = sweep_k3(config)
    monkeypatch.setattr(settings, "LGI_PT_THREADS", 1)
    serial = sweep_k3(config)
    assert render_table(threaded) == render_table(serial)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"alphas": []},
        {"alphas": [0.1], "tau_steps": 1},
        {"alphas": [0.1], "tau_min": 1.0, "tau_max": 1.0},
        {"alphas": [math.pi / 2]},
        {"alphas": [-0.1]},
    ],
)
def test_sweep_config_rejects_bad_grids(kwargs):
    with pytest.raises(ValidationError):
        SweepConfig(**kwargs)


# ==================== EXTREMUM ====================

def test_golden_section_finds_parabola_peak():
    x, y = golden_section_max(lambda v: -(v - 0.3) ** 2 + 2.0, 0.0, 1.0, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert y == pytest.approx(2.0, abs=1e-15)


def test_golden_section_narrow_bracket():
    x, y = golden_section_max(lambda v: v, 1.0, 1.0 + 1e-12, tol=1e-10)
    assert x == pytest.approx(1.0, abs=1e-11)
    assert y == x


def test_k3_max_unitary_limit():
    record = k3_max(0.0)
    assert record.k3_max == pytest.approx(1.5, abs=1e-12)
    assert record.tau_min_arg == pytest.approx(math.pi / 6, abs=1e-6)


def test_k3_max_near_exceptional_point():
    record = k3_max(0.499 * math.pi)
    assert record.k3_max >= 2.99
    assert record.k3_max <= 3.0 + 1e-9
    assert abs(record.tau_min_arg - math.pi / 4) < 0.01


def test_k3_max_dominates_grid_and_quarter_point():
    alpha = 0.6
    record = k3_max(alpha)
    assert record.k3_max >= k3_quarter_tau(alpha) - 1e-12
    for tau in tau_grid(0.01, QUARTER_TAU, 40):
        assert record.k3_max >= k3(alpha, tau).k3 - 1e-12


def test_k3_max_grows_with_alpha():
    records = tau_min_curve(ALPHA_GRID + [0.499 * math.pi])
    assert [r.alpha for r in records] == ALPHA_GRID + [0.499 * math.pi]
    for previous, current in zip(records, records[1:]):
        assert current.k3_max > previous.k3_max
    assert all(1.5 - 1e-9 <= r.k3_max <= 3.0 + 1e-9 for r in records)


@pytest.mark.parametrize(
    "kwargs",
    [{"refine_tol": 0.0}, {"grid_points": 100}, {"window_max": 0.0}, {"window_max": math.inf}],
)
def test_k3_max_rejects_bad_arguments(kwargs):
    with pytest.raises(DomainError):
        k3_max(0.2, **kwargs)


def test_correlations_at_quarter_tau():
    rows = correlations_at_quarter_tau(ALPHA_GRID)
    assert [row.alpha for row in rows] == ALPHA_GRID
    for row in rows:
        assert row.tau == QUARTER_TAU
        assert row.c31 == pytest.approx(-1.0, abs=1e-10)
        assert row.k3 == pytest.approx(k3_quarter_tau(row.alpha), abs=1e-9)


def test_quarter_tau_rows_follow_sin_squared():
    rows = correlations_at_quarter_tau(ALPHA_GRID)
    for row in rows:
        sin_sq = math.sin(row.alpha) ** 2
        assert row.c21 == pytest.approx(sin_sq, abs=1e-12)
        assert row.c32 == pytest.approx(2 * sin_sq / (1 + sin_sq), abs=1e-12)
    for earlier, later in zip(rows, rows[1:]):
        assert later.c21 >= earlier.c21
        assert later.c32 >= earlier.c32
    assert rows[-1].c21 > 0.99 and rows[-1].c32 > 0.99


def test_quarter_tau_row_at_quarter_alpha():
    (row,) = correlations_at_quarter_tau([math.pi / 4])
    assert row.c21 == pytest.approx(0.5, abs=1e-12)
    assert row.c32 == pytest.approx(2 / 3, abs=1e-12)
    assert row.k3 == pytest.approx(13 / 6, abs=1e-12)


# ==================== EXPORT ====================

def _rows():
    return [
        ScanRow(alpha=0.0, tau=0.0, error="tau must be > 0, got 0.0"),
        ScanRow(alpha=0.0, tau=0.1, c21=0.98, c32=0.98, c31=0.5, k3=1.46),
    ]


def test_format_number():
    assert format_number(None) == ""
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(-3.0) == "-3"
    assert format_number(7) == "7"
    assert format_number(TableFormat.CSV) == "csv"


def test_render_empty_table():
    assert render_table([]) == HEADER
    assert render_table([], TableFormat.JSON) == "[]\n"


def test_render_csv_rows():
    text = render_table(_rows())
    lines = text.split("\n")
    assert lines[0] + "\n" == HEADER
    assert lines[1] == "0,0,,,,"
    assert lines[2] == "0,0.10000000000000001,0.97999999999999998,0.97999999999999998,0.5,1.46"
    assert text.endswith("\n") and "\r" not in text


def test_csv_round_trip_is_exact():
    rows = sweep_k3(SweepConfig(alphas=[0.0, 0.9], tau_steps=17))
    parsed = parse_csv_rows(render_table(rows))
    assert len(parsed) == len(rows)
    for original, restored in zip(rows, parsed):
        for name in ScanRow.EXPORT_FIELDS:
            assert getattr(restored, name) == getattr(original, name)


def test_json_round_trip_is_exact():
    rows = sweep_k3(SweepConfig(alphas=[0.0, 0.9], tau_steps=17))
    parsed = parse_json_rows(render_table(rows, TableFormat.JSON))
    assert len(parsed) == len(rows)
    assert parsed[0].k3 is None and parsed[0].c21 is None
    for original, restored in zip(rows, parsed):
        for name in ScanRow.EXPORT_FIELDS:
            assert getattr(restored, name) == getattr(original, name)


@pytest.mark.parametrize("text", ["", "not json", "[{\"alpha\": 0.1"])
def test_parse_json_rows_rejects_malformed_text(text):
    with pytest.raises(DomainError):
        parse_json_rows(text)


def test_render_json_rows():
    records = json.loads(render_table(_rows(), TableFormat.JSON))
    assert [list(record) for record in records] == [list(ScanRow.EXPORT_FIELDS)] * 2
    assert records[0]["k3"] is None
    assert records[1]["c31"] == 0.5


def test_render_extremum_records():
    records = [ExtremumRecord(alpha=0.0, k3_max=1.5, tau_min_arg=0.5)]
    assert render_table(records) == "alpha,k3_max,tau_min_arg\n0,1.5,0.5\n"


def test_render_is_deterministic():
    rows = sweep_k3(SweepConfig(alphas=[0.4], tau_steps=9))
    assert render_table(rows) == render_table(sweep_k3(SweepConfig(alphas=[0.4], tau_steps=9)))


def test_export_to_stream_and_path(tmp_path):
    stream = io.StringIO()
    export_table(_rows(), destination=stream)
    path = tmp_path / "rows.csv"
    export_table(_rows(), destination=path)
    assert path.read_text(encoding="utf-8") == stream.getvalue()


def test_export_to_stdout(capsys):
    export_table([], TableFormat.CSV)
    assert capsys.readouterr().out == HEADER


def test_export_to_directory_fails(tmp_path):
    with pytest.raises(ExportError) as excinfo:
        export_table(_rows(), destination=tmp_path)
    assert str(tmp_path) in str(excinfo.value)


# ==================== PARALLEL ====================

@pytest.mark.parametrize("workers", [1, 3, 8])
def test_parallel_map_keeps_input_order(workers):
    items = list(range(50))
    assert parallel_map(lambda x: x * x, items, workers=workers) == [x * x for x in items]
