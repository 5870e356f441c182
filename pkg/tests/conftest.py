import sys

import numpy as np
import pandas as pd
import pytest
from loguru import logger

from backtest.engine import MarketData
from dataio.bars import BarSeries
from dataio.synthetic import SyntheticSpec, generate_synthetic
from factors.panel import FactorPanel, Stage


@pytest.fixture(autouse=True)
def quiet_logger():
    """CLI tests swap loguru sinks onto captured streams; restore a plain one afterwards."""
    yield
    logger.remove()
    logger.add(sys.stderr, level='WARNING')


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_panel(rng, n_dates=5, n_stocks=8, n_factors=3, stage=Stage.RAW, n_industries=3):
    dates = pd.bdate_range('2021-01-04', periods=n_dates, name='date')
    stocks = [f"S{i + 1:04d}" for i in range(n_stocks)]
    index = pd.MultiIndex.from_product([dates, stocks], names=['date', 'stock_id'])
    names = [f"f{j}" for j in range(n_factors)]
    return FactorPanel(
        values=pd.DataFrame(rng.standard_normal((len(index), n_factors)), index=index, columns=names),
        mktcap=pd.Series(np.exp(rng.normal(20.0, 1.0, len(index))), index=index),
        industry=pd.Series([f"IND{i % n_industries}" for i in range(len(index))], index=index),
        stage=stage,
    )


def make_index_bars(closes, start='2021-01-04', fsb=None):
    closes = np.asarray(closes, dtype=float)
    dates = pd.bdate_range(start, periods=len(closes), name='date')
    frame = pd.DataFrame({
        'open': closes,
        'high': closes * 1.01,
        'low': closes * 0.99,
        'close': closes,
        'volume': np.full(len(closes), 1.0e6),
        'fsb': np.full(len(closes), 1.0e9) if fsb is None else np.asarray(fsb, dtype=float),
    }, index=dates)
    return BarSeries(frame, kind='index')


def make_stock_bars(dates, opens, closes, stock_id):
    frame = pd.DataFrame({
        'open': opens,
        'high': np.maximum(opens, closes) * 1.01,
        'low': np.minimum(opens, closes) * 0.99,
        'close': closes,
        'volume': np.full(len(dates), 1.0e5),
    }, index=pd.DatetimeIndex(dates, name='date'))
    return BarSeries(frame, kind='stock', stock_id=stock_id)


@pytest.fixture
def panel_factory():
    return make_panel


@pytest.fixture
def index_bars_factory():
    return make_index_bars


@pytest.fixture
def stock_bars_factory():
    return make_stock_bars


@pytest.fixture(scope='session')
def small_spec():
    return SyntheticSpec(seed=11, n_days=500, n_stocks=12, n_factors=10, n_signal=2, null_rate=0.0)


@pytest.fixture(scope='session')
def small_market(small_spec):
    return generate_synthetic(small_spec)


@pytest.fixture(scope='session')
def small_market_data(small_market):
    return MarketData(index=small_market.index, stocks=small_market.stocks, factors=small_market.factors)
