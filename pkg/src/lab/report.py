"""
CSV output and bound checks for experiment tables.
"""
from pathlib import Path
from typing import List, Optional, Tuple, Union

import pandas as pd

from ..exceptions import BoundViolationError, ExperimentError
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory

DEFAULT_FLOAT_FORMAT = "%.10g"


def check_columns(columns: List[str]) -> List[str]:
    """Names of the boolean bound columns (suffix `_ok`) of a table."""
    return [c for c in columns if c.endswith('_ok')]


def bound_violations(df: pd.DataFrame) -> List[Tuple[int, str]]:
    """(row position, column) of every `*_ok` cell that is False."""
    violations = []
    for column in check_columns(list(df.columns)):
        failed = ~df[column].astype(bool).to_numpy()
        violations.extend((int(i), column) for i in failed.nonzero()[0])
    return violations


def assert_bounds(df: pd.DataFrame, logger: Optional[LoggerInterface] = None) -> None:
    """
    Raise if any `*_ok` column of the table is False.

    Raises:
        BoundViolationError: Naming the first failed column and the number of failed cells
    """
    logger = logger or LoggerFactory.create("lab.report")
    violations = bound_violations(df)
    if not violations:
        return
    for row, column in violations:
        logger.error(f"bound check {column} failed in row {row}")
    row, column = violations[0]
    raise BoundViolationError(
        f"{len(violations)} bound check(s) failed, first {column} in row {row}",
        bound=column, rows=sorted({r for r, _ in violations})
    )


def write_table(df: pd.DataFrame, path: Union[str, Path], float_format: str = DEFAULT_FLOAT_FORMAT,
                logger: Optional[LoggerInterface] = None) -> Path:
    """Write a table as CSV with a header row, '.' decimals and the table's column order."""
    logger = logger or LoggerFactory.create("lab.report")
    path = Path(path)
    try:
        if path.parent != Path('.'):
            path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(path, index=False, float_format=float_format, decimal='.')
    except OSError as e:
        raise ExperimentError(f"cannot write {path}: {e}", path=str(path), original_error=e) from e
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def format_table(df: pd.DataFrame, float_format: str = DEFAULT_FLOAT_FORMAT) -> str:
    """CSV text of a table, as written by `write_table`."""
    return df.to_csv(index=False, float_format=float_format, decimal='.')
