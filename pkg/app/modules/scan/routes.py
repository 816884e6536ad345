"""
API routes for sweeps and extremum searches.
"""
from typing import List

from fastapi import APIRouter, Query

from app.core.http import to_http_exception
from app.modules.pt_core.service import parse_angle
from app.modules.scan import service
from app.modules.scan.schemas import ExtremumRecord, ScanRow, SweepConfig

router = APIRouter(prefix="/scan", tags=["Scan"])


@router.post("/sweep", response_model=List[ScanRow])
def sweep(config: SweepConfig):
    """
    K3 over the (alpha, tau) grid, alpha outer and tau inner.

    Failed points come back with `error` set instead of aborting the sweep.

    **Example request**:
    ```json
    {"alphas": [0.0], "tau_min": 0.0, "tau_max": 3.141592653589793, "tau_steps": 7}
    ```

    **Example row**:
    ```json
    {"alpha": 0.0, "tau": 0.5235987755982988, "c21": 0.5, "c32": 0.5, "c31": -0.5, "k3": 1.5, "error": null}
    ```
    """
    return service.sweep_k3(config)


@router.get("/k3max", response_model=ExtremumRecord)
def get_k3_max(
    alpha: str = Query(...),
    refine_tol: float = Query(1e-10, gt=0),
):
    """
    Maximum of K3 over tau in (0, pi/4] and the smallest tau reaching it.

    **Example response** for `alpha=0`:
    ```json
    {"alpha": 0.0, "k3_max": 1.5, "tau_min_arg": 0.5235987755982988}
    ```

    Errors: 400 for alpha outside [0, pi/2 - guard).
    """
    try:
        return service.k3_max(parse_angle(alpha), refine_tol)
    except Exception as e:
        raise to_http_exception(e)


@router.get("/quarter", response_model=List[ScanRow])
def get_quarter_tau(
    alphas: str = Query(..., description="Comma list, e.g. 0,0.25pi"),
):
    """
    Correlations at the fixed step tau = pi/4.
    """
    try:
        values = [parse_angle(token) for token in alphas.split(",") if token.strip()]
        return service.correlations_at_quarter_tau(values)
    except Exception as e:
        raise to_http_exception(e)
