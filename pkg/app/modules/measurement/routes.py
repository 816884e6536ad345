"""
API routes for the two-time measurement protocol.
"""
from fastapi import APIRouter, Query

from app.core.http import to_http_exception
from app.modules.measurement import service
from app.modules.measurement.schemas import TwoTimeResponse
from app.modules.pt_core.service import parse_angle

router = APIRouter(prefix="/measurement", tags=["Measurement"])


@router.get("/two-time", response_model=TwoTimeResponse)
async def get_two_time_distribution(
    alpha: str = Query(...),
    t_i: float = Query(..., ge=0),
    t_j: float = Query(...),
):
    """
    Outcome probabilities at t_i and conditional probabilities at t_j,
    starting from the maximally mixed state.
    """
    try:
        alpha_value = parse_angle(alpha)
        dist = service.two_time_protocol(alpha_value, t_i, t_j)
    except Exception as e:
        raise to_http_exception(e)

    return service.to_response(alpha_value, t_i, t_j, dist)
