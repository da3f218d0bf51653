"""
Report cache service.

This module provides functions to save, retrieve, list and delete assessment
reports keyed by a content hash of the enumerated group. Reports are stored as
JSON either as files under a cache directory or in Redis with an expiration.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import redis

from app.algebra.matgrp import EnumeratedGroup
from app.config.settings import settings

# Set up logging
logger = logging.getLogger(__name__)

BACKENDS = ("none", "file", "redis")

# Redis client, created on first use
redis_client = None
_redis_checked = False


def _get_redis_client():
    global redis_client, _redis_checked
    if _redis_checked:
        return redis_client
    _redis_checked = True
    try:
        redis_pool = redis.ConnectionPool(
            host=settings.REDIS_HOST,
            port=settings.REDIS_PORT,
            db=settings.REDIS_DB,
            password=settings.REDIS_PASSWORD or None,
            decode_responses=True  # Auto-decode bytes to strings
        )
        client = redis.Redis(connection_pool=redis_pool)
        client.ping()
        logger.info(f"Successfully connected to Redis at {settings.REDIS_HOST}:{settings.REDIS_PORT}")
        redis_client = client
    except redis.RedisError as e:
        logger.warning(f"Failed to initialize Redis connection: {str(e)}")
        redis_client = None
    return redis_client


def report_key(G: EnumeratedGroup, tags: Sequence[str] = ()) -> str:
    """
    Content hash of the group: version, ambient, field, size, sorted element codes and module tags.

    The key does not depend on the generating set.
    """
    digest = hashlib.sha256()
    F = G.field
    header = f"{settings.VERSION}|{G.spec.ambient}|{F.p}^{F.k}|{G.n}|{','.join(sorted(tags))}"
    digest.update(header.encode())
    if G.spec.form is not None:
        digest.update(G.spec.form.astype("<i8").tobytes())
    digest.update(G.codes.astype("<i8").tobytes())
    return digest.hexdigest()


def _redis_key(key: str) -> str:
    return f"report:{key}"


def _resolve(backend: Optional[str], cache_dir: Optional[str]):
    backend = backend or settings.CACHE_BACKEND
    if backend not in BACKENDS:
        raise ValueError(f"unknown cache backend {backend!r}")
    return backend, Path(cache_dir or settings.CACHE_DIR)


def save_report(key: str, report: Dict, backend: Optional[str] = None,
                cache_dir: Optional[str] = None) -> bool:
    """
    Store a report.

    Args:
        key: report_key of the group
        report: JSON-serializable report dictionary
        backend: "file", "redis" or "none"; settings.CACHE_BACKEND by default
        cache_dir: directory of the file backend

    Returns:
        True if successful, False otherwise
    """
    backend, directory = _resolve(backend, cache_dir)
    if backend == "none":
        return False
    payload = json.dumps(report, sort_keys=True)
    if backend == "file":
        try:
            directory.mkdir(parents=True, exist_ok=True)
            (directory / f"{key}.json").write_text(payload + "\n")
            logger.debug(f"Report {key[:12]} saved under {directory}")
            return True
        except OSError as e:
            logger.error(f"Failed to write report {key[:12]}: {str(e)}")
            return False
    client = _get_redis_client()
    if not client:
        logger.warning("Redis client not available, report will not be cached")
        return False
    try:
        result = client.set(_redis_key(key), payload, ex=settings.CACHE_TTL_SECONDS)
        if result:
            logger.debug(f"Report {key[:12]} saved to Redis")
            return True
        logger.warning(f"Failed to save report {key[:12]} to Redis")
        return False
    except redis.RedisError as e:
        logger.error(f"Redis error while saving report: {str(e)}")
        return False


def get_report(key: str, backend: Optional[str] = None, cache_dir: Optional[str] = None) -> Optional[Dict]:
    """
    Retrieve a cached report.

    Returns:
        The report dictionary if found, None otherwise
    """
    backend, directory = _resolve(backend, cache_dir)
    if backend == "none":
        return None
    try:
        if backend == "file":
            path = directory / f"{key}.json"
            if not path.exists():
                logger.debug(f"Cache miss for {key[:12]}")
                return None
            data = json.loads(path.read_text())
        else:
            client = _get_redis_client()
            if not client:
                logger.warning("Redis client not available, cannot retrieve report")
                return None
            raw = client.get(_redis_key(key))
            if not raw:
                logger.debug(f"Cache miss for {key[:12]}")
                return None
            data = json.loads(raw)
        logger.info(f"Cache hit for {key[:12]}")
        return data
    except (OSError, redis.RedisError) as e:
        logger.error(f"Error while retrieving report {key[:12]}: {str(e)}")
        return None
    except json.JSONDecodeError as e:
        logger.error(f"JSON decoding error while retrieving report {key[:12]}: {str(e)}")
        return None


def delete_report(key: str, backend: Optional[str] = None, cache_dir: Optional[str] = None) -> bool:
    """
    Delete a cached report.

    Returns:
        True if successful (also when nothing was stored), False otherwise
    """
    backend, directory = _resolve(backend, cache_dir)
    if backend == "none":
        return True
    try:
        if backend == "file":
            path = directory / f"{key}.json"
            if path.exists():
                path.unlink()
        else:
            client = _get_redis_client()
            if not client:
                logger.warning("Redis client not available, cannot delete report")
                return False
            client.delete(_redis_key(key))
        logger.debug(f"Report {key[:12]} deleted")
        return True
    except (OSError, redis.RedisError) as e:
        logger.error(f"Error while deleting report {key[:12]}: {str(e)}")
        return False


def list_reports(backend: Optional[str] = None, cache_dir: Optional[str] = None) -> List[str]:
    """Sorted keys of every cached report."""
    backend, directory = _resolve(backend, cache_dir)
    if backend == "none":
        return []
    if backend == "file":
        if not directory.is_dir():
            return []
        return sorted(p.stem for p in directory.glob("*.json"))
    client = _get_redis_client()
    if not client:
        logger.warning("Redis client not available, cannot list reports")
        return []
    try:
        return sorted(k[len("report:"):] for k in client.scan_iter(match="report:*"))
    except redis.RedisError as e:
        logger.error(f"Redis error while listing reports: {str(e)}")
        return []
