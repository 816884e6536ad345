from fastapi import HTTPException, status

from app.core.errors import DomainError, LgiPtError


def to_http_exception(error: Exception) -> HTTPException:
    """
    Map a service error onto an HTTP error.
    DomainError -> 400, other domain errors -> 422, anything else -> 500.
    """
    if isinstance(error, DomainError):
        return HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=str(error),
        )
    if isinstance(error, LgiPtError):
        return HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=str(error),
        )
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail=f"Simulation error: {str(error)}",
    )
