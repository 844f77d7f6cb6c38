"""
Application settings management using Pydantic v2
"""
from typing import Any, Dict
from functools import lru_cache
import logging

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Runtime settings for the simulator (OWC_* environment variables)"""

    model_config = SettingsConfigDict(
        env_file='.env',
        env_file_encoding='utf-8',
        case_sensitive=False,
        populate_by_name=True,
        extra='forbid'
    )

    # Environment settings
    environment: str = Field(default="development", alias="OWC_ENV")
    debug: bool = Field(default=False, alias="OWC_DEBUG")

    # Logging settings
    log_level: str = Field(default="INFO", alias="OWC_LOG_LEVEL")
    log_file: str = Field(default="", alias="OWC_LOG_FILE")
    log_json: bool = Field(default=False, alias="OWC_LOG_JSON")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        alias="OWC_LOG_FORMAT"
    )

    # Execution settings
    n_jobs: int = Field(default=1, alias="OWC_N_JOBS", ge=1, le=256)
    oracle_budget: int = Field(default=10_000_000, alias="OWC_ORACLE_BUDGET", ge=1)
    table_cache_size: int = Field(default=256, alias="OWC_TABLE_CACHE_SIZE", ge=1, le=100_000)
    default_seed_count: int = Field(default=20, alias="OWC_SEED_COUNT", ge=1, le=10_000)

    # Reinforcement learning defaults (overridable per scenario and per CLI call)
    learning_rate: float = Field(default=0.1, alias="OWC_LEARNING_RATE", gt=0.0, le=1.0)
    discount: float = Field(default=0.9, alias="OWC_DISCOUNT", gt=0.0, le=1.0)
    epsilon_start: float = Field(default=1.0, alias="OWC_EPSILON_START", ge=0.0, le=1.0)
    epsilon_min: float = Field(default=0.01, alias="OWC_EPSILON_MIN", ge=0.0, le=1.0)
    epsilon_decay: float = Field(default=0.999, alias="OWC_EPSILON_DECAY", gt=0.0, le=1.0)
    episodes: int = Field(default=20_000, alias="OWC_EPISODES", ge=0)

    # Monitoring settings
    metrics_enabled: bool = Field(default=True, alias="OWC_METRICS_ENABLED")
    metrics_file: str = Field(default="", alias="OWC_METRICS_FILE")

    @field_validator('environment')
    @classmethod
    def validate_environment(cls, v: str) -> str:
        allowed_envs = ['development', 'testing', 'production']
        if v not in allowed_envs:
            raise ValueError(f"Environment must be one of: {', '.join(allowed_envs)}")
        return v

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        allowed_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if v.upper() not in allowed_levels:
            raise ValueError(f"Log level must be one of: {', '.join(allowed_levels)}")
        return v.upper()

    def is_production(self) -> bool:
        """Check if running in production environment"""
        return self.environment == 'production'

    def is_development(self) -> bool:
        """Check if running in development environment"""
        return self.environment == 'development'

    def use_json_logs(self) -> bool:
        return self.log_json or self.is_production()

    def get_log_config(self) -> Dict[str, Any]:
        """Get logging configuration"""
        formatter = 'json' if self.use_json_logs() else 'default'
        handlers: Dict[str, Dict[str, Any]] = {
            'console': {
                'class': 'logging.StreamHandler',
                'formatter': formatter,
                'level': self.log_level,
                'stream': 'ext://sys.stderr',
            }
        }

        # Add file handler only if log file is specified
        if self.log_file:
            handlers['file'] = {
                'class': 'logging.handlers.RotatingFileHandler',
                'filename': self.log_file,
                'maxBytes': 10485760,  # 10MB
                'backupCount': 5,
                'formatter': formatter,
                'level': self.log_level,
            }

        return {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'default': {
                    'format': self.log_format,
                },
                'json': {
                    '()': 'pythonjsonlogger.json.JsonFormatter',
                    'fmt': '%(asctime)s %(name)s %(levelname)s %(message)s',
                }
            },
            'handlers': handlers,
            'root': {
                'level': self.log_level,
                'handlers': list(handlers.keys())
            }
        }


@lru_cache()
def get_settings() -> Settings:
    """Get settings singleton"""
    return Settings()
