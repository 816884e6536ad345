"""
API routes for correlations and the K3 functional.
"""
from fastapi import APIRouter, Query

from app.core.http import to_http_exception
from app.modules.correlations import service
from app.modules.correlations.schemas import CorrelationMethod, CorrelationResult
from app.modules.pt_core.service import parse_angle

router = APIRouter(tags=["Correlations"])


@router.get("/correlations", response_model=CorrelationResult)
def get_k3(
    alpha: str = Query(...),
    tau: float = Query(..., gt=0),
    method: CorrelationMethod = Query(CorrelationMethod.SIMULATION),
):
    """
    C21, C32, C31 and K3 = C21 + C32 - C31 for measurement step tau.

    The simulation is the default; closed forms must be requested.

    **Example response** for `alpha=0.25pi&tau=0.7853981633974483`:
    ```json
    {"c21": 0.5, "c32": 0.6666666666666666, "c31": -1.0, "k3": 2.1666666666666665,
     "method": "sim", "regime": "beyond-tsirelson"}
    ```
    """
    try:
        return service.k3(parse_angle(alpha), tau, method)
    except Exception as e:
        raise to_http_exception(e)
