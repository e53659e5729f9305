# config.py
import logging
import os
from typing import Any, Callable, Dict

from dotenv import load_dotenv

from .errors import InvalidInputError
from .models import RunConfig

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

ENV_FIELDS: Dict[str, tuple] = {
    "seed": ("REDLAB_SEED", int),
    "tolerance": ("REDLAB_TOLERANCE", float),
    "n_max": ("REDLAB_N_MAX", int),
    "margin": ("REDLAB_MARGIN", float),
    "oracle_bound": ("REDLAB_ORACLE_BOUND", int),
    "max_log_k": ("REDLAB_MAX_LOG_K", float),
    "cases": ("REDLAB_CASES", int),
    "samples": ("REDLAB_SAMPLES", int),
    "workers": ("REDLAB_WORKERS", int),
}


def _read(name: str, parse: Callable[[str], Any]) -> Any:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return parse(raw.strip())
    except ValueError:
        raise InvalidInputError(f"{name}={raw!r} is not a valid {parse.__name__}")


def load_run_config(**overrides: Any) -> RunConfig:
    """RunConfig from REDLAB_* variables; overrides that are not None win."""
    values: Dict[str, Any] = {}
    for field, (name, parse) in ENV_FIELDS.items():
        value = _read(name, parse)
        if value is not None:
            values[field] = value
    values.update({key: value for key, value in overrides.items() if value is not None})
    config = RunConfig(**values)
    logger.debug(f"run configuration: {config.model_dump()}")
    return config


def configure_logging(default_level: str = "INFO") -> None:
    logging.basicConfig(level=os.getenv("LOG_LEVEL", default_level), format=LOG_FORMAT)
