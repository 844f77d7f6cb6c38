# src/experiments/export.py
"""
결과 CSV, 시드 요약, 메타데이터 저장
"""
import json
from pathlib import Path
from typing import Dict, Union

import pandas as pd

from ..models.errors import OutputExistsError
from ..models.results import ExperimentResult
from ..utils import get_logger

logger = get_logger(__name__)


def output_paths(path: Union[str, Path]) -> Dict[str, Path]:
    """CSV, `<stem>_summary.csv` and `<name>.meta.json` next to each other"""
    path = Path(path)
    return {
        'csv': path,
        'summary': path.with_name(f"{path.stem}_summary.csv"),
        'meta': path.with_name(f"{path.name}.meta.json"),
    }


def _write_frame(df: pd.DataFrame, path: Path):
    # fixed line terminator and float repr keep reruns byte-identical
    df.to_csv(path, index=False, lineterminator='\n')


def export_csv(result: ExperimentResult, path: Union[str, Path], overwrite: bool = False) -> Dict[str, Path]:
    """
    Write the rows, the seed summary and the run metadata.

    An empty result still writes the header. Existing files are refused
    unless `overwrite`; nothing is written in that case.
    """
    paths = output_paths(path)
    if not overwrite:
        for p in paths.values():
            if p.exists():
                raise OutputExistsError(str(p))

    paths['csv'].parent.mkdir(parents=True, exist_ok=True)
    _write_frame(result.to_frame(), paths['csv'])
    _write_frame(result.summary(), paths['summary'])
    paths['meta'].write_text(
        json.dumps(result.metadata, sort_keys=True, indent=2, default=str) + "\n",
        encoding='utf-8',
    )

    logger.info(f"Wrote {len(result)} rows to {paths['csv']}")
    return paths


def write_history(df: pd.DataFrame, path: Union[str, Path], overwrite: bool = False) -> Path:
    """Training curve CSV"""
    path = Path(path)
    if path.exists() and not overwrite:
        raise OutputExistsError(str(path))
    path.parent.mkdir(parents=True, exist_ok=True)
    _write_frame(df, path)
    return path
