# src/rl/qtable.py
"""
Dense Q-table and its persistence (.npy, shape in the header)
"""
from pathlib import Path
from typing import Optional, Tuple, Union
import logging

import numpy as np

from ..models.errors import ContractViolationError, OutputExistsError, ScenarioValidationError

logger = logging.getLogger(__name__)


class QTable:
    """Q(s, a) over encoded states and flattened actions, zero-initialised"""

    def __init__(self, num_states: int, num_actions: int, values: Optional[np.ndarray] = None):
        if values is None:
            values = np.zeros((num_states, num_actions), dtype=np.float64)
        if values.shape != (num_states, num_actions):
            raise ContractViolationError(
                "Q-table shape mismatch",
                {'expected': [num_states, num_actions], 'actual': list(values.shape)}
            )
        self.values = values

    @classmethod
    def for_env(cls, env) -> 'QTable':
        return cls(env.num_states, env.num_actions)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]

    def check_env(self, env) -> None:
        if self.shape != (env.num_states, env.num_actions):
            raise ContractViolationError(
                "Q-table does not match the environment",
                {'table': list(self.shape), 'env': [env.num_states, env.num_actions]}
            )


def save_qtable(q: QTable, path: Union[str, Path], overwrite: bool = False) -> Path:
    """Write the table as .npy; refuses to replace an existing file unless overwrite"""
    path = Path(path)
    if path.exists() and not overwrite:
        raise OutputExistsError(str(path))
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('wb') as f:
        np.save(f, q.values, allow_pickle=False)
    logger.info(f"Q-table saved: {path} shape={q.shape}")
    return path


def load_qtable(path: Union[str, Path], env=None) -> QTable:
    """Read a .npy table; checks dimensions against env when given"""
    path = Path(path)
    try:
        with path.open('rb') as f:
            values = np.load(f, allow_pickle=False)
    except FileNotFoundError as e:
        raise ScenarioValidationError(f"Q-table file not found: {path}", field='qtable', value=str(path)) from e
    except ValueError as e:
        raise ScenarioValidationError(f"unreadable Q-table {path}: {e}", field='qtable', value=str(path)) from e

    if values.ndim != 2:
        raise ContractViolationError("Q-table must be two-dimensional", {'shape': list(values.shape)})
    q = QTable(*values.shape, values=values.astype(np.float64, copy=False))
    if env is not None:
        q.check_env(env)
    return q
