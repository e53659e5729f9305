# main.py
"""Starts the redlab API under uvicorn; bind address from APP_HOST / APP_PORT."""
import logging
import os
from typing import Tuple

import uvicorn

from .api import app
from .config import configure_logging
from .errors import InvalidInputError

logger = logging.getLogger(__name__)

DEFAULT_HOST = "0.0.0.0"
DEFAULT_PORT = 8000


def server_address() -> Tuple[str, int]:
    host = os.getenv("APP_HOST", DEFAULT_HOST)
    raw = os.getenv("APP_PORT", str(DEFAULT_PORT))
    try:
        port = int(raw)
    except ValueError:
        raise InvalidInputError(f"APP_PORT={raw!r} is not a valid port")
    if not 0 < port < 65536:
        raise InvalidInputError(f"APP_PORT must lie in 1..65535, got {port}")
    return host, port


def run_app():
    configure_logging()
    host, port = server_address()
    logger.info(f"Serving redlab on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level=os.getenv("LOG_LEVEL", "INFO").lower())


if __name__ == "__main__":
    run_app()
