# src/models/training.py
"""
Training hyperparameters
"""
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, ConfigDict, model_validator

from ..config import Settings, get_settings


class TrainConfig(BaseModel):
    """Tabular RL hyperparameters; all values are recorded in run metadata"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    learning_rate: float = Field(default=0.1, gt=0.0, le=1.0)
    discount: float = Field(default=0.9, gt=0.0, le=1.0)
    epsilon_start: float = Field(default=1.0, ge=0.0, le=1.0)
    epsilon_min: float = Field(default=0.01, ge=0.0, le=1.0)
    epsilon_decay: float = Field(default=0.999, gt=0.0, le=1.0)
    episodes: int = Field(default=20_000, ge=0)
    max_steps_guard: int = Field(default=10_000, ge=1)
    convergence_window: int = Field(default=100, ge=1)

    @model_validator(mode='after')
    def validate_epsilon(self) -> 'TrainConfig':
        if self.epsilon_min > self.epsilon_start:
            raise ValueError("epsilon_min must not exceed epsilon_start")
        return self

    @classmethod
    def from_settings(
        cls,
        settings: Optional[Settings] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> 'TrainConfig':
        """Settings defaults, then non-None overrides"""
        settings = settings or get_settings()
        values: Dict[str, Any] = {
            'learning_rate': settings.learning_rate,
            'discount': settings.discount,
            'epsilon_start': settings.epsilon_start,
            'epsilon_min': settings.epsilon_min,
            'epsilon_decay': settings.epsilon_decay,
            'episodes': settings.episodes,
        }
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls(**values)
