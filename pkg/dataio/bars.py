# dataio/bars.py - OHLCV bar series: CSV loading, validation and writing

from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

from utils.errors import DataError, ParseError, ValidationError

PRICE_COLUMNS = ['open', 'high', 'low', 'close']
INDEX_COLUMNS = ['date', 'open', 'high', 'low', 'close', 'volume', 'fsb']
STOCK_COLUMNS = ['date', 'stock_id', 'open', 'high', 'low', 'close', 'volume']
BAR_KINDS = ('index', 'stock')


@dataclass(frozen=True, eq=False)
class BarSeries:
    """
    Dated bars for the index (with financing security balance) or one stock.

    `frame` is indexed by a strictly increasing DatetimeIndex named 'date' and holds
    float columns open, high, low, close, volume (+ fsb for the index).
    """
    frame: pd.DataFrame
    kind: str = 'index'
    stock_id: str = None

    def __post_init__(self):
        if self.kind not in BAR_KINDS:
            raise ValidationError(f"unknown bar kind '{self.kind}'")
        expected = INDEX_COLUMNS[1:] if self.kind == 'index' else STOCK_COLUMNS[2:]
        if list(self.frame.columns) != expected:
            raise ValidationError(f"bar columns must be {expected}, got {list(self.frame.columns)}")
        if not self.frame.index.is_monotonic_increasing or not self.frame.index.is_unique:
            raise ValidationError("bar dates must be strictly increasing")

    def __len__(self):
        return len(self.frame)

    @property
    def dates(self):
        return self.frame.index

    def column(self, name):
        return self.frame[name].to_numpy()

    def equals(self, other):
        return self.kind == other.kind and self.stock_id == other.stock_id and self.frame.equals(other.frame)


def ohlc_violations(frame):
    """Boolean mask of rows breaking low <= min(open, close), high >= max(open, close) or positivity."""
    bad = (frame['low'] > frame[['open', 'close']].min(axis=1)) | (frame['high'] < frame[['open', 'close']].max(axis=1))
    bad |= (frame[PRICE_COLUMNS] <= 0).any(axis=1)
    bad |= frame['volume'] < 0
    if 'fsb' in frame.columns:
        bad |= frame['fsb'] <= 0
    return bad


def load_bars(path, kind='index'):
    """
    Load a bar CSV.

    Args:
        path: CSV file following the index or stock header
        kind: 'index' (needs the fsb column) or 'stock'

    Returns:
        BarSeries for kind='index'; dict stock_id -> BarSeries for kind='stock'
    """
    if kind not in BAR_KINDS:
        raise ValueError(f"kind must be one of {BAR_KINDS}")
    columns = INDEX_COLUMNS if kind == 'index' else STOCK_COLUMNS
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError:
        raise DataError(f"bar file not found: {path}") from None
    except pd.errors.ParserError as exc:
        raise ParseError(str(exc), path) from None

    if list(raw.columns) != columns:
        raise ParseError(f"header must be {','.join(columns)}", path, line=1)

    parsed = _parse_rows(raw, columns, path)
    if kind == 'index':
        series = _build_series(parsed, path, 'index')
        logger.debug(f"Loaded {len(series)} index bars from {path}")
        return series

    stocks = {
        stock_id: _build_series(group.drop(columns='stock_id'), path, 'stock', stock_id)
        for stock_id, group in parsed.groupby('stock_id', sort=True)
    }
    logger.debug(f"Loaded bars for {len(stocks)} stocks from {path}")
    return stocks


def _parse_rows(raw, columns, path):
    parsed = pd.DataFrame(index=raw.index)
    parsed['line'] = raw.index + 2
    parsed['date'] = pd.to_datetime(raw['date'], format='ISO8601', errors='coerce')
    bad = parsed['date'].isna()
    if 'stock_id' in columns:
        parsed['stock_id'] = raw['stock_id'].str.strip()
        bad |= parsed['stock_id'] == ''
    for name in columns:
        if name in ('date', 'stock_id'):
            continue
        parsed[name] = _parse_numbers(raw[name])
        bad |= ~np.isfinite(parsed[name])
    if bad.any():
        first = int(parsed.loc[bad, 'line'].iloc[0])
        raise ParseError("malformed row (unparseable date, id or number)", path, line=first)
    return parsed


def _parse_numbers(column):
    # float() round-trips what to_csv writes; to_numeric only locates the bad cells
    try:
        return column.str.strip().astype(float)
    except ValueError:
        exact = pd.Series(np.nan, index=column.index)
        ok = pd.to_numeric(column, errors='coerce').notna()
        exact[ok] = column[ok].str.strip().astype(float)
        return exact


def _build_series(parsed, path, kind, stock_id=None):
    bad = ohlc_violations(parsed)
    if bad.any():
        row = parsed[bad].iloc[0]
        raise ValidationError(f"{path}:{int(row['line'])}: OHLC/positivity violation on {row['date'].date()}")
    duplicated = parsed['date'].duplicated()
    if duplicated.any():
        row = parsed[duplicated].iloc[0]
        raise ValidationError(f"{path}:{int(row['line'])}: duplicate date {row['date'].date()}")
    frame = parsed.drop(columns='line').set_index('date').sort_index()
    return BarSeries(frame.astype(float), kind=kind, stock_id=stock_id)


def write_bars(series, path):
    frame = series.frame.reset_index()
    frame.to_csv(path, index=False, date_format='%Y-%m-%d')
    return path


def write_stock_bars(stocks, path):
    """Write a stock_id -> BarSeries mapping as one stock CSV, ordered by stock then date."""
    parts = []
    for stock_id in sorted(stocks):
        frame = stocks[stock_id].frame.reset_index()
        frame.insert(1, 'stock_id', stock_id)
        parts.append(frame)
    pd.concat(parts, ignore_index=True)[STOCK_COLUMNS].to_csv(path, index=False, date_format='%Y-%m-%d')
    return path


def close_table(stocks, field='close'):
    """Dates x stocks table of one bar field."""
    return pd.DataFrame({stock_id: bars.frame[field] for stock_id, bars in stocks.items()}).sort_index()
