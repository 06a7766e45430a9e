"""
Configuration settings for the solver suite
"""
import logging
from pydantic_settings import BaseSettings
from pydantic import Field

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Solver settings with proper field definitions"""

    # Logging
    log: str = Field(default="WARNING")  # DIFACTOR_LOG

    # Exact fallbacks run whenever the bipartite order 2n is at most this
    exact_threshold: int = Field(default=24, ge=2)

    # Oracle budget defaults
    budget_nodes: int = Field(default=10_000_000, gt=0)
    budget_seconds: float = Field(default=30.0, gt=0)
    oracle_max_vertices: int = Field(default=32, gt=0)

    # Bounded exact searches inside the constructive pipeline
    local_budget_nodes: int = Field(default=200_000, gt=0)

    # Packing
    path_pair_candidates: int = Field(default=12, ge=2)
    max_improve_iterations: int = Field(default=10_000, gt=0)

    # Explorer
    explore_workers: int = Field(default=1, ge=1)
    default_seed: int = Field(default=0)

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "DIFACTOR_"
        case_sensitive = False
        # Allow extra fields from .env that aren't defined
        extra = "ignore"


# Initialize settings
settings = Settings()

logger.debug(
    f"Configuration loaded: exact_threshold={settings.exact_threshold}, "
    f"budget_nodes={settings.budget_nodes}, budget_seconds={settings.budget_seconds}"
)
