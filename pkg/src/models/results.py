# src/models/results.py
"""
Experiment output rows using Pydantic v2
"""
import math
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel, Field, ConfigDict

CSV_COLUMNS = [
    'sweep_var',
    'scheme',
    'sum_rate_bps',
    'utility',
    'feasible',
    'seed',
    'episodes',
    'power_w',
    'blockers',
    'arrays',
    'user',
    'rate_bps',
    'user_rates_bps',
    'infeasible_users',
]

SORT_COLUMNS = ['arrays', 'sweep_var', 'power_w', 'scheme', 'seed', 'user']


def join_values(values: Sequence[Any]) -> str:
    """Semicolon-joined list for a single CSV cell"""
    return ";".join(repr(float(v)) if isinstance(v, float) else str(v) for v in values)


class ResultRow(BaseModel):
    """One (sweep point, scheme, seed[, user]) measurement; user = -1 for scheme totals"""
    model_config = ConfigDict(frozen=True)

    sweep_var: float
    scheme: str = Field(..., min_length=1)
    sum_rate_bps: float = Field(..., ge=0)
    utility: float
    feasible: bool
    seed: int
    episodes: int = Field(default=0, ge=0)
    power_w: float = Field(..., gt=0)
    blockers: int = Field(default=0, ge=0)
    arrays: int = Field(default=1, ge=0)
    user: int = -1
    rate_bps: Optional[float] = None
    user_rates_bps: str = ""
    infeasible_users: str = ""

    def model_post_init(self, __context: Any) -> None:
        if not math.isfinite(self.sum_rate_bps):
            raise ValueError("sum rate must be finite")


class ExperimentResult(BaseModel):
    """Rows of an experiment plus reproducibility metadata"""
    experiment: str
    rows: List[ResultRow] = Field(default_factory=list)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        """Rows in deterministic order"""
        if not self.rows:
            return pd.DataFrame(columns=CSV_COLUMNS)
        df = pd.DataFrame([r.model_dump() for r in self.rows], columns=CSV_COLUMNS)
        return df.sort_values(SORT_COLUMNS, kind='mergesort').reset_index(drop=True)

    def summary(self) -> pd.DataFrame:
        """Mean and std over seeds per (sweep point, scheme)"""
        df = self.to_frame()
        keys = ['sweep_var', 'scheme', 'power_w', 'blockers', 'arrays']
        columns = keys + [
            'seeds', 'sum_rate_mean', 'sum_rate_std', 'rate_mean', 'rate_std', 'utility_mean', 'feasible_rate'
        ]
        if df.empty:
            return pd.DataFrame(columns=columns)
        grouped = df.groupby(keys, sort=True)
        out = pd.DataFrame({
            'seeds': grouped['seed'].nunique(),
            'sum_rate_mean': grouped['sum_rate_bps'].mean(),
            'sum_rate_std': grouped['sum_rate_bps'].std().fillna(0.0),
            'rate_mean': grouped['rate_bps'].mean(),
            'rate_std': grouped['rate_bps'].std().fillna(0.0),
            'utility_mean': grouped['utility'].mean(),
            'feasible_rate': grouped['feasible'].mean(),
        }).reset_index()
        return out[columns]
