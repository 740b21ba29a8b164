"""
Settings for the command line driver.

Values come from WINDOWMSF_* environment variables or a .env file in the
working directory; command line flags override them.
"""

import logging
from typing import Any, Dict, Optional

from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from windowmsf.errors import ConfigError
from windowmsf.models import StructureParams


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="WINDOWMSF_", env_file=".env", extra="ignore")

    seed: int = 0
    epsilon: float = 0.5
    k: int = 2
    max_weight: int = 64
    repetitions: Optional[int] = None
    levels: Optional[int] = None
    cert_constant: float = 1.0
    sample_constant: float = 1.0
    check: str = "batch"
    log_level: str = "WARNING"
    dump_dir: str = "./dumps"


def get_settings() -> Settings:
    try:
        return Settings()
    except ValidationError as e:
        raise ConfigError(f"bad WINDOWMSF_ setting: {e.errors()[0]['msg']}") from e


def configure_logging(settings: Settings) -> None:
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def make_params(settings: Settings, overrides: Dict[str, Any]) -> StructureParams:
    """
    Merge settings with command line overrides (None means not given).

    Raises:
        ConfigError: if the merged values do not validate.
    """
    values: Dict[str, Any] = {
        "seed": settings.seed,
        "epsilon": settings.epsilon,
        "k": settings.k,
        "max_weight": settings.max_weight,
        "repetitions": settings.repetitions,
        "levels": settings.levels,
        "cert_constant": settings.cert_constant,
        "sample_constant": settings.sample_constant,
        "check": settings.check,
    }
    values.update({name: value for name, value in overrides.items() if value is not None})
    try:
        return StructureParams(**values)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise ConfigError(f"{where}: {first['msg']}") from e
