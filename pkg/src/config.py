"""
Centralized configuration management using Pydantic Settings
Single source of truth for engine limits, logging and suite parameters

Every field can be overridden through an AINF_-prefixed environment variable
or a local .env file.
"""
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Engine settings with environment variable support and validation"""

    model_config = SettingsConfigDict(
        env_prefix="AINF_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ========================================================================
    # Application
    # ========================================================================
    app_name: str = Field(
        default="A-infinity Nerve Engine",
        description="Application name"
    )
    app_version: str = Field(
        default="1.0.0",
        description="Application version"
    )
    environment: str = Field(
        default="development",
        description="Environment: development, testing, production"
    )
    log_level: str = Field(
        default="INFO",
        description="Logging level"
    )
    json_logs: bool = Field(
        default=False,
        description="Render logs as JSON instead of the console renderer"
    )

    # ========================================================================
    # Search & Enumeration Limits
    # ========================================================================
    search_leaf_limit: int = Field(
        default=2 ** 24,
        ge=1,
        description="Maximum number of leaves visited by a Maurer-Cartan search"
    )
    max_cochain_dimension: int = Field(
        default=6,
        ge=0,
        le=8,
        description="Largest n accepted for the cochain algebra N*(Δⁿ)"
    )
    max_nerve_dimension: int = Field(
        default=3,
        ge=0,
        le=5,
        description="Largest simplicial level enumerated in a nerve"
    )

    # ========================================================================
    # Hochschild Complexes
    # ========================================================================
    hochschild_top_degree: int = Field(
        default=3,
        ge=1,
        le=8,
        description="Default cohomological degree up to which Hochschild cohomology is exact"
    )
    hochschild_max_dimension: int = Field(
        default=4096,
        ge=1,
        description="Cap on the dimension of a single Hochschild cochain group"
    )

    # ========================================================================
    # Validation
    # ========================================================================
    strict_checks: bool = Field(
        default=True,
        description="Assert Stasheff and morphism identities in every constructor"
    )

    # ========================================================================
    # Verification Suites
    # ========================================================================
    suite_workers: int = Field(
        default=1,
        ge=1,
        le=64,
        description="Process pool size for suite instances (1 = sequential)"
    )
    suite_random_instances: int = Field(
        default=25,
        ge=1,
        le=1000,
        description="Number of random instances per randomized suite"
    )

    # ========================================================================
    # Monitoring & Observability
    # ========================================================================
    metrics_enabled: bool = Field(
        default=True,
        description="Record Prometheus metrics"
    )

    # ========================================================================
    # Validators
    # ========================================================================

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level"""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Must be one of {valid_levels}")
        return v.upper()

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        """Validate environment"""
        valid_envs = ["development", "testing", "production"]
        if v.lower() not in valid_envs:
            raise ValueError(f"Invalid environment: {v}. Must be one of {valid_envs}")
        return v.lower()


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance
    Uses lru_cache to ensure singleton pattern
    """
    return Settings()


# Global settings instance for convenience
settings = get_settings()
