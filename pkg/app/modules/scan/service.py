"""
Sweeps and extremum searches over (alpha, tau), plus deterministic table export.
"""
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, TextIO, Tuple, TypeVar, Union

import numpy as np
from pydantic import BaseModel

from app.core.config import settings
from app.core.errors import DomainError, ExportError, LgiPtError
from app.modules.correlations.schemas import CorrelationMethod
from app.modules.correlations.service import k3
from app.modules.pt_core.service import check_alpha
from app.modules.scan.schemas import (
    QUARTER_TAU,
    ExtremumRecord,
    ScanRow,
    SweepConfig,
    TableFormat,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

MIN_GRID_POINTS = 512
DEFAULT_WINDOW_MAX = math.pi / 4


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """Map over items on a thread pool; results come back in input order."""
    workers = settings.worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def tau_grid(tau_min: float, tau_max: float, steps: int) -> List[float]:
    """Uniform grid including both endpoints."""
    return np.linspace(tau_min, tau_max, steps).tolist()


def scan_point(
    alpha: float,
    tau: float,
    method: CorrelationMethod = CorrelationMethod.SIMULATION,
    ep_guard: Optional[float] = None,
) -> ScanRow:
    """Evaluate one grid point; domain failures become an error row."""
    try:
        result = k3(alpha, tau, method, ep_guard)
    except LgiPtError as e:
        logger.warning("Sweep point alpha=%r tau=%r failed: %s", alpha, tau, e)
        return ScanRow(alpha=alpha, tau=tau, error=str(e))

    return ScanRow(
        alpha=alpha,
        tau=tau,
        c21=result.c21,
        c32=result.c32,
        c31=result.c31,
        k3=result.k3,
    )


def sweep_k3(config: SweepConfig) -> List[ScanRow]:
    """One row per (alpha, tau), alpha outer and tau inner."""
    taus = tau_grid(config.tau_min, config.tau_max, config.tau_steps)
    points = [(alpha, tau) for alpha in config.alphas for tau in taus]
    return parallel_map(
        lambda point: scan_point(point[0], point[1], config.method, config.ep_guard),
        points,
    )


def golden_section_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of f on [a, b].

    Assumes a single local maximum inside the bracket; returns (x, f(x))
    with the final bracket narrower than tol.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    # Steps needed to shrink the bracket below tol
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    return (c, yc) if yc > yd else (d, yd)


def k3_max(
    alpha: float,
    refine_tol: float = 1e-10,
    method: CorrelationMethod = CorrelationMethod.SIMULATION,
    grid_points: int = MIN_GRID_POINTS,
    window_max: float = DEFAULT_WINDOW_MAX,
    ep_guard: Optional[float] = None,
) -> ExtremumRecord:
    """
    Global maximum of K3(alpha, tau) over tau in (0, window_max].

    A dense grid brackets the best point, golden-section search refines it,
    and the refined value is only kept if it beats the grid. The reported
    tau is the smallest one within refine_tol of the maximum. K3 is
    pi-periodic in tau, so windows wider than pi add nothing.
    """
    check_alpha(alpha, ep_guard)
    if refine_tol <= 0:
        raise DomainError(f"refine_tol must be > 0, got {refine_tol!r}")
    if grid_points < MIN_GRID_POINTS:
        raise DomainError(f"grid_points must be >= {MIN_GRID_POINTS}, got {grid_points}")
    if not math.isfinite(window_max) or window_max <= 0:
        raise DomainError(f"window_max must be > 0, got {window_max!r}")

    def objective(tau: float) -> float:
        return k3(alpha, tau, method, ep_guard).k3

    step = window_max / grid_points
    taus = [step * k for k in range(1, grid_points + 1)]
    values = parallel_map(objective, taus)

    best = int(np.argmax(values))
    best_tau, best_value = taus[best], values[best]

    lower = taus[best - 1] if best > 0 else 0.5 * step
    upper = taus[best + 1] if best + 1 < len(taus) else window_max
    refined_tau, refined_value = golden_section_max(objective, lower, upper, refine_tol)
    if refined_value > best_value:
        best_tau, best_value = refined_tau, refined_value

    for tau, value in zip(taus, values):
        if tau >= best_tau:
            break
        if value >= best_value - refine_tol:
            logger.debug("K3 tie at tau=%r within %r of the maximum", tau, refine_tol)
            best_tau = tau
            break

    return ExtremumRecord(alpha=alpha, k3_max=best_value, tau_min_arg=best_tau)


def tau_min_curve(
    alphas: Iterable[float],
    refine_tol: float = 1e-10,
    method: CorrelationMethod = CorrelationMethod.SIMULATION,
    window_max: float = DEFAULT_WINDOW_MAX,
    ep_guard: Optional[float] = None,
) -> List[ExtremumRecord]:
    """k3_max over a list of alphas, in the given order."""
    return [
        k3_max(alpha, refine_tol, method, window_max=window_max, ep_guard=ep_guard)
        for alpha in alphas
    ]


def correlations_at_quarter_tau(
    alphas: Iterable[float],
    method: CorrelationMethod = CorrelationMethod.SIMULATION,
    ep_guard: Optional[float] = None,
) -> List[ScanRow]:
    """Rows at the fixed step tau = pi/4, where C31 = -1 for every alpha."""
    rows = []
    for alpha in alphas:
        result = k3(alpha, QUARTER_TAU, method, ep_guard)
        rows.append(
            ScanRow(
                alpha=alpha,
                tau=QUARTER_TAU,
                c21=result.c21,
                c32=result.c32,
                c31=result.c31,
                k3=result.k3,
            )
        )
    return rows


# ==================== EXPORT ====================

def format_number(value) -> str:
    """17 significant digits, locale independent; None becomes an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def export_fields(rows: Sequence[BaseModel], fields: Optional[Sequence[str]] = None) -> Tuple[str, ...]:
    """Columns to write: explicit fields, else the row model's EXPORT_FIELDS, else all model fields."""
    if fields is not None:
        return tuple(fields)
    model = type(rows[0]) if rows else ScanRow
    return tuple(getattr(model, "EXPORT_FIELDS", model.model_fields))


def render_table(
    rows: Sequence[BaseModel],
    fmt: TableFormat = TableFormat.CSV,
    fields: Optional[Sequence[str]] = None,
) -> str:
    """Serialize rows; identical input always gives identical text."""
    columns = export_fields(rows, fields)

    if fmt == TableFormat.JSON:
        records = [{name: _json_value(getattr(row, name)) for name in columns} for row in rows]
        return json.dumps(records, indent=2) + "\n"

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(getattr(row, name)) for name in columns])
    return buffer.getvalue()


def _json_value(value):
    if hasattr(value, "value"):
        return value.value
    return value


def export_table(
    rows: Sequence[BaseModel],
    fmt: TableFormat = TableFormat.CSV,
    destination: Union[str, Path, TextIO, None] = None,
    fields: Optional[Sequence[str]] = None,
) -> None:
    """
    Write rows as CSV or JSON to a path, an open stream, or stdout.

    Raises:
        ExportError: if the destination path cannot be written
    """
    text = render_table(rows, fmt, fields)

    if destination is None:
        sys.stdout.write(text)
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return

    path = Path(destination)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as e:
        raise ExportError(f"Failed to write table to {path}: {e}") from e
    logger.info("Wrote %d rows to %s", len(rows), path)


def parse_csv_rows(text: str) -> List[ScanRow]:
    """Read back a ScanRow CSV table."""
    reader = csv.DictReader(io.StringIO(text))
    return [
        ScanRow(**{name: (float(cell) if cell != "" else None) for name, cell in record.items()})
        for record in reader
    ]


def parse_json_rows(text: str) -> List[ScanRow]:
    """Read back a ScanRow JSON table; null cells stay None."""
    try:
        records = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"Not a JSON table: {e}") from e
    return [ScanRow(**record) for record in records]
