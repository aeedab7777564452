"""Run a sync library call from an async handler and map errors to status codes"""
import asyncio
import logging

from apsums.errors import ApsumsError, UsageError

logger = logging.getLogger(__name__)


async def run_sync(func, *args, **kwargs):
    """Await func in a worker thread; returns a (body, status) tuple

    Usage errors map to 400, every other library error to 422.
    """
    try:
        body = await asyncio.to_thread(func, *args, **kwargs)
    except ApsumsError as e:
        status = 400 if isinstance(e, UsageError) else 422
        logger.warning("[API] %s failed with %d: %s", func.__name__, status, e)
        return {"error": str(e)}, status
    return body, 200
