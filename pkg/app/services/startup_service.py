"""
Startup service for checking the runtime environment when the CLI starts.
"""
import logging
from typing import Dict

import numpy as np
import scipy
import sympy

from app.config.settings import settings
from app.utils.accel import NUMBA_AVAILABLE

# Set up logging
logger = logging.getLogger(__name__)


def initialize_services(cache_backend: str = "none") -> Dict[str, object]:
    """
    Log library versions, accelerator availability and cache configuration.

    Args:
        cache_backend: backend selected for this run

    Returns:
        Dictionary summarizing the environment
    """
    logger.info(f"Initializing {settings.PROJECT_NAME} {settings.VERSION}...")
    env = {
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "sympy": sympy.__version__,
        "numba": NUMBA_AVAILABLE,
        "cache_backend": cache_backend,
        "max_order": settings.MAX_ORDER,
        "threads": settings.THREADS,
    }
    if not NUMBA_AVAILABLE:
        logger.warning("Numba is not available; row reduction runs on numpy kernels")
    if cache_backend == "redis":
        if settings.REDIS_HOST:
            logger.info(f"Report cache uses Redis at {settings.REDIS_HOST}:{settings.REDIS_PORT}")
        else:
            logger.warning("Redis cache requested but REDIS_HOST is not set")
    elif cache_backend == "file":
        logger.info(f"Report cache directory: {settings.CACHE_DIR}")
    logger.debug(f"Environment: {env}")
    logger.info("Services initialization complete")
    return env
