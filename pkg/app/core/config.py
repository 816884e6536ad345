import os
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    LGI_PT_THREADS: Optional[int] = Field(default=None, ge=1)
    LGI_PT_EP_GUARD: float = Field(default=1e-4, description="Exceptional-point guard, fraction of pi")
    LGI_PT_NORM_TOL: float = Field(default=1e-12, gt=0)
    LGI_PT_PROB_TOL: float = Field(default=1e-12, gt=0)
    LGI_PT_LOG_LEVEL: str = "WARNING"

    class Config:
        case_sensitive = True

    @field_validator("LGI_PT_EP_GUARD")
    @classmethod
    def check_ep_guard(cls, value: float) -> float:
        if not 1e-6 <= value < 0.5:
            raise ValueError("LGI_PT_EP_GUARD must lie in [1e-6, 0.5)")
        return value

    def worker_count(self) -> int:
        """Number of sweep workers; LGI_PT_THREADS caps it when set."""
        if self.LGI_PT_THREADS is not None:
            return self.LGI_PT_THREADS
        return min(4, os.cpu_count() or 1)


settings = Settings()
