import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator


class Settings(BaseModel):
    """Configuración de gpdkit, leída del entorno (y de un .env opcional)"""
    threads: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    rel_tol: float = Field(default=1e-9, gt=0)
    abs_tol: float = Field(default=1e-12, gt=0)
    float_digits: int = Field(default=12, ge=1, le=17)

    @field_validator("log_level")
    @classmethod
    def _upper(cls, value: str) -> str:
        return value.upper()


_ENV_KEYS = {
    "threads": "GPDKIT_THREADS",
    "log_level": "GPDKIT_LOG_LEVEL",
    "rel_tol": "GPDKIT_REL_TOL",
    "abs_tol": "GPDKIT_ABS_TOL",
    "float_digits": "GPDKIT_FLOAT_DIGITS",
}


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Carga la configuración una sola vez por proceso
    """
    load_dotenv()
    values = {field: os.environ[key] for field, key in _ENV_KEYS.items() if os.environ.get(key)}
    return Settings(**values)
