# Use Numba if available. Otherwise fall back to standard interpreter

import logging

from app.config.settings import settings

# Set up logging
logger = logging.getLogger(__name__)

try:
    if not settings.USE_NUMBA:
        raise ImportError("disabled by USE_NUMBA")
    import numba

    njit = numba.njit
    NUMBA_AVAILABLE = True
    logger.debug("Numba compiler successfully imported")

except ImportError as e:
    logger.warning(f"Numba unavailable ({e}), falling back to numpy kernels")

    def null_decorator(pyfunc=None, **kwargs):
        """Null decorator if Numba accelerators are not available"""
        def wrap(func):
            return func
        return wrap if pyfunc is None else wrap(pyfunc)

    njit = null_decorator
    NUMBA_AVAILABLE = False
