"""
API routes for the PT-symmetric Hamiltonian.
"""
from fastapi import APIRouter, Query

from app.core.http import to_http_exception
from app.modules.pt_core import service
from app.modules.pt_core.schemas import EigenReport, MatrixEntry, PropagatorResponse

router = APIRouter(prefix="/pt", tags=["PT Hamiltonian"])


@router.get("/eigen", response_model=EigenReport)
async def get_eigen(
    alpha: str = Query(..., description="Radians, or with a pi suffix like 0.25pi"),
    s: float = Query(1.0, description="Energy scale, non-zero"),
):
    """
    Eigenvalues, eigenvector overlap and PT-symmetry diagnostics of H(s, alpha).
    """
    try:
        h = service.build_hamiltonian(s, service.parse_angle(alpha))
        return service.eigen_report(h)
    except Exception as e:
        raise to_http_exception(e)


@router.get("/propagator", response_model=PropagatorResponse)
async def get_propagator(
    alpha: str = Query(...),
    t_prime: float = Query(..., description="Dimensionless time t' = (delta_E / 2) t"),
):
    """
    Non-unitary propagator U(t') as row-major (re, im) entries.
    """
    try:
        h = service.build_hamiltonian(1.0, service.parse_angle(alpha))
        u = service.propagator(h, t_prime)
    except Exception as e:
        raise to_http_exception(e)

    return PropagatorResponse(
        alpha=h.alpha,
        t_prime=t_prime,
        entries=[[MatrixEntry(re=z.real, im=z.imag) for z in row] for row in u.tolist()],
    )
