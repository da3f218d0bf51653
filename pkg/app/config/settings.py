"""
Application settings and configuration.
"""
import os
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Application settings."""
    PROJECT_NAME: str = "adequacy-toolkit"
    VERSION: str = "1.0.0"

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # Reproducibility
    SEED: int = int(os.getenv("SEED", "20240601"))

    # Caps
    MAX_ORDER: int = int(os.getenv("MAX_ORDER", "200000"))
    BRUTEFORCE_MAX_ORDER: int = int(os.getenv("BRUTEFORCE_MAX_ORDER", "300"))
    ORACLE_MAX_ORDER: int = int(os.getenv("ORACLE_MAX_ORDER", "500"))
    SUBMODULE_ENUM_LIMIT: int = int(os.getenv("SUBMODULE_ENUM_LIMIT", "200000"))
    MEATAXE_RETRIES: int = int(os.getenv("MEATAXE_RETRIES", "64"))
    ROOT_SUBSET_BUDGET: int = int(os.getenv("ROOT_SUBSET_BUDGET", "16"))

    # Subgroup search
    SEARCH_SAMPLES: int = int(os.getenv("SEARCH_SAMPLES", "200"))
    SEARCH_GENERATORS: int = int(os.getenv("SEARCH_GENERATORS", "2"))

    # Concurrency
    THREADS: int = int(os.getenv("THREADS", "1"))
    USE_NUMBA: bool = os.getenv("USE_NUMBA", "True").lower() in ("true", "1", "t")

    # Report cache
    CACHE_BACKEND: str = os.getenv("CACHE_BACKEND", "none")  # none | file | redis
    CACHE_DIR: str = os.getenv("CACHE_DIR", ".cache/reports")
    CACHE_TTL_SECONDS: int = int(os.getenv("CACHE_TTL_SECONDS", str(30 * 24 * 60 * 60)))

    # Redis settings
    REDIS_HOST: str = os.getenv("REDIS_HOST", "localhost")
    REDIS_PORT: int = int(os.getenv("REDIS_PORT", "6379"))
    REDIS_DB: int = int(os.getenv("REDIS_DB", "0"))
    REDIS_PASSWORD: str = os.getenv("REDIS_PASSWORD", "")

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",  # Allow extra fields in settings
    )


# Create global settings object
settings = Settings()
