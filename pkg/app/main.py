from fastapi import FastAPI

from app.core.config import settings
from app.core.log import configure_logging
from app.modules.health import routes as health_routes
from app.modules.pt_core import routes as pt_routes
from app.modules.measurement import routes as measurement_routes
from app.modules.correlations import routes as correlation_routes
from app.modules.scan import routes as scan_routes

configure_logging(settings.LGI_PT_LOG_LEVEL)

app = FastAPI(
    title="lgi-pt",
    description="Leggett-Garg temporal correlations under PT-symmetric qubit dynamics",
    version="0.1.0"
)

# Include Routers
app.include_router(health_routes.router, tags=["Health"])
app.include_router(pt_routes.router)
app.include_router(measurement_routes.router)
app.include_router(correlation_routes.router)
app.include_router(scan_routes.router)


@app.get("/")
async def root():
    """
    Root endpoint providing basic API information.
    """
    return {
        "message": "Leggett-Garg K3 simulator for PT-symmetric two-level systems",
        "docs_url": "/docs",
        "redoc_url": "/redoc"
    }
