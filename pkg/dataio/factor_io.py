# dataio/factor_io.py - Factor CSV <-> FactorPanel

import pandas as pd
from loguru import logger

from factors.panel import FactorPanel, Stage
from utils.errors import DataError, ParseError

LEADING_COLUMNS = ['date', 'stock_id', 'mktcap', 'industry']


def load_factor_panel(path, stage=Stage.RAW):
    """Read `date,stock_id,mktcap,industry,<factors...>`; empty cells become nulls."""
    try:
        raw = pd.read_csv(path, dtype={'stock_id': str, 'industry': str})
    except FileNotFoundError:
        raise DataError(f"factor file not found: {path}") from None
    except pd.errors.ParserError as exc:
        raise ParseError(str(exc), path) from None

    if list(raw.columns[:4]) != LEADING_COLUMNS or len(raw.columns) < 5:
        raise ParseError(f"header must start with {','.join(LEADING_COLUMNS)} followed by factor columns", path, line=1)

    dates = pd.to_datetime(raw['date'], format='ISO8601', errors='coerce')
    if dates.isna().any():
        raise ParseError("unparseable date", path, line=int(dates.isna().to_numpy().argmax()) + 2)
    factor_cols = list(raw.columns[4:])
    for name in factor_cols + ['mktcap']:
        if not pd.api.types.is_numeric_dtype(raw[name]):
            converted = pd.to_numeric(raw[name], errors='coerce')
            broken = converted.isna() & raw[name].notna()
            raise ParseError(f"non-numeric value in column '{name}'", path, line=int(broken.to_numpy().argmax()) + 2)

    raw['date'] = dates
    panel = FactorPanel.from_frame(raw, factor_cols, stage=stage)
    logger.debug(f"Loaded factor panel {len(panel.dates)} dates x {len(panel.stock_ids)} stocks x {len(factor_cols)} factors")
    return panel


def write_factor_panel(panel, path):
    panel.to_frame().to_csv(path, index=False, date_format='%Y-%m-%d')
    return path
