# dataio/synthetic.py - Seeded regime-switching market used in place of licensed data

import json
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
from loguru import logger

import config
from dataio.bars import BarSeries
from dataio.vocabulary import factor_names
from factors.panel import FactorPanel, Stage
from utils.errors import ValidationError

INDEX_START_PRICE = 3000.0
BASE_VOLUME = 1.0e8
BASE_FSB = 1.0e12
FSB_NOISE = 0.002


@dataclass(frozen=True)
class RegimeSpec:
    drift: float
    volatility: float
    duration: float
    volume_level: float = None
    fsb_drift: float = None

    def __post_init__(self):
        if self.volatility < 0:
            raise ValidationError("regime volatility must be >= 0")
        if self.duration < 1:
            raise ValidationError("regime mean duration must be >= 1")
        # Volume and balance growth follow the regime unless given explicitly
        if self.volume_level is None:
            object.__setattr__(self, 'volume_level', 1.0 + 40.0 * self.volatility)
        if self.fsb_drift is None:
            object.__setattr__(self, 'fsb_drift', 0.5 * self.drift)


def _default_regimes():
    return tuple(RegimeSpec(**r) for r in config.SYNTHETIC_SPEC['regimes'])


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int = config.SYNTHETIC_SPEC['seed']
    regimes: tuple = field(default_factory=_default_regimes)
    n_stocks: int = config.SYNTHETIC_SPEC['n_stocks']
    n_days: int = config.SYNTHETIC_SPEC['n_days']
    n_factors: int = config.SYNTHETIC_SPEC['n_factors']
    n_signal: int = config.SYNTHETIC_SPEC['n_signal']
    signal_strength: float = config.SYNTHETIC_SPEC['signal_strength']
    idio_volatility: float = config.SYNTHETIC_SPEC['idio_volatility']
    n_industries: int = config.SYNTHETIC_SPEC['n_industries']
    null_rate: float = config.SYNTHETIC_SPEC['null_rate']
    start_date: str = config.SYNTHETIC_SPEC['start_date']

    def __post_init__(self):
        regimes = tuple(r if isinstance(r, RegimeSpec) else RegimeSpec(**r) for r in self.regimes)
        object.__setattr__(self, 'regimes', regimes)
        if not regimes:
            raise ValidationError("synthetic spec needs at least one regime")
        for name in ('n_stocks', 'n_days', 'n_factors', 'n_industries'):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1")
        if not 0 <= self.n_signal <= self.n_factors:
            raise ValidationError("n_signal must lie in [0, n_factors]")
        if self.idio_volatility < 0 or not 0 <= self.null_rate < 1:
            raise ValidationError("idio_volatility must be >= 0 and null_rate in [0, 1)")

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def to_dict(self):
        return asdict(self) | {'regimes': [asdict(r) for r in self.regimes]}

    @classmethod
    def from_json(cls, path):
        with open(path, encoding='utf-8') as handle:
            return cls.from_dict(json.load(handle))

    def to_json(self, path):
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(self.to_dict(), handle, indent=2)
        return path


@dataclass(frozen=True, eq=False)
class SyntheticMarket:
    index: BarSeries
    stocks: dict
    factors: FactorPanel
    regime_path: pd.Series
    signal_factors: tuple


def regime_chain(spec, rng):
    """Markov chain over regimes: stay with probability 1 - 1/duration, else jump uniformly elsewhere."""
    n_regimes = len(spec.regimes)
    stay = np.array([1.0 - 1.0 / r.duration for r in spec.regimes])
    path = np.empty(spec.n_days, dtype=int)
    path[0] = rng.integers(n_regimes)
    draws = rng.random(spec.n_days)
    jumps = rng.integers(1, max(n_regimes, 2), size=spec.n_days)
    for t in range(1, spec.n_days):
        current = path[t - 1]
        if n_regimes > 1 and draws[t] >= stay[current]:
            path[t] = (current + jumps[t]) % n_regimes
        else:
            path[t] = current
    return path


def _bars_from_returns(log_returns, start_price, volatility, rng):
    """OHLC around a close path; intraday ranges scale with the day's volatility."""
    close = start_price * np.exp(np.cumsum(log_returns, axis=0))
    previous = np.concatenate([np.broadcast_to(start_price, (1,) + close.shape[1:]), close[:-1]])
    shape = close.shape
    opened = previous * np.exp(0.3 * volatility * rng.standard_normal(shape))
    high = np.maximum(opened, close) * np.exp(0.5 * volatility * np.abs(rng.standard_normal(shape)))
    low = np.minimum(opened, close) * np.exp(-0.5 * volatility * np.abs(rng.standard_normal(shape)))
    return opened, high, low, close


def generate_synthetic(spec):
    """
    Generate index bars, per-stock bars and a raw factor panel from a seeded regime chain.

    Args:
        spec: SyntheticSpec

    Returns:
        SyntheticMarket with the true regime path and the planted signal factor names
    """
    rng = np.random.default_rng(spec.seed)
    dates = pd.bdate_range(spec.start_date, periods=spec.n_days, name='date')
    path = regime_chain(spec, rng)

    drift = np.array([r.drift for r in spec.regimes])[path]
    vol = np.array([r.volatility for r in spec.regimes])[path]
    volume_level = np.array([r.volume_level for r in spec.regimes])[path]
    fsb_drift = np.array([r.fsb_drift for r in spec.regimes])[path]

    # Index
    index_ret = drift + vol * rng.standard_normal(spec.n_days)
    opened, high, low, close = _bars_from_returns(index_ret, INDEX_START_PRICE, vol, rng)
    volume = BASE_VOLUME * volume_level * np.exp(0.2 * rng.standard_normal(spec.n_days))
    fsb = BASE_FSB * np.exp(np.cumsum(fsb_drift + FSB_NOISE * rng.standard_normal(spec.n_days)))
    index = BarSeries(pd.DataFrame({
        'open': opened, 'high': high, 'low': low, 'close': close, 'volume': volume, 'fsb': fsb,
    }, index=dates), kind='index')

    # Stocks: beta exposure to the index plus idiosyncratic noise
    n_stocks = spec.n_stocks
    stock_ids = [f"S{i + 1:04d}" for i in range(n_stocks)]
    betas = rng.uniform(0.6, 1.4, n_stocks)
    start_prices = rng.uniform(5.0, 100.0, n_stocks)
    shares_out = np.exp(rng.normal(20.0, 1.0, n_stocks))
    industries = np.array([f"IND{i % spec.n_industries:02d}" for i in range(n_stocks)])
    idio = spec.idio_volatility * rng.standard_normal((spec.n_days, n_stocks))
    stock_ret = betas * index_ret[:, None] + idio
    stock_vol = np.sqrt((betas * vol[:, None]) ** 2 + spec.idio_volatility ** 2)
    s_open, s_high, s_low, s_close = _bars_from_returns(stock_ret, start_prices, stock_vol, rng)
    s_volume = 1.0e6 * np.exp(0.3 * rng.standard_normal((spec.n_days, n_stocks)))

    stocks = {}
    for j, stock_id in enumerate(stock_ids):
        frame = pd.DataFrame({
            'open': s_open[:, j], 'high': s_high[:, j], 'low': s_low[:, j],
            'close': s_close[:, j], 'volume': s_volume[:, j],
        }, index=dates)
        stocks[stock_id] = BarSeries(frame, kind='stock', stock_id=stock_id)

    panel, signal = _factor_panel(spec, rng, dates, stock_ids, stock_ret, s_close * shares_out, industries)
    logger.info(f"Generated synthetic market: {spec.n_days} days, {n_stocks} stocks, {spec.n_factors} factors, "
                f"{len(spec.regimes)} regimes (seed {spec.seed})")
    return SyntheticMarket(
        index=index,
        stocks=stocks,
        factors=panel,
        regime_path=pd.Series(path, index=dates, name='regime'),
        signal_factors=signal,
    )


def _factor_panel(spec, rng, dates, stock_ids, stock_ret, mktcap, industries):
    """Signal factors load on the next day's stock return; every factor also carries size/industry exposure."""
    n_days, n_stocks = stock_ret.shape
    names = factor_names(spec.n_factors)
    scale = spec.idio_volatility if spec.idio_volatility > 0 else 1.0
    future = np.zeros_like(stock_ret)
    future[:-1] = stock_ret[1:] / scale

    log_cap = np.log(mktcap)
    size_score = (log_cap - log_cap.mean()) / (log_cap.std() or 1.0)
    industry_codes = np.unique(industries, return_inverse=True)[1]

    values = np.empty((n_days, n_stocks, spec.n_factors))
    for f in range(spec.n_factors):
        size_loading = rng.normal(0.0, 0.5)
        industry_effect = rng.normal(0.0, 0.5, spec.n_industries)[industry_codes]
        column = rng.standard_normal((n_days, n_stocks)) + size_loading * size_score + industry_effect
        if f < spec.n_signal:
            column += spec.signal_strength / (f + 1) * future
        values[:, :, f] = column

    if spec.null_rate > 0:
        values[rng.random(values.shape) < spec.null_rate] = np.nan

    index = pd.MultiIndex.from_product([dates, stock_ids], names=['date', 'stock_id'])
    panel = FactorPanel(
        values=pd.DataFrame(values.reshape(n_days * n_stocks, -1), index=index, columns=names),
        mktcap=pd.Series(mktcap.reshape(-1), index=index, name='mktcap'),
        industry=pd.Series(np.tile(industries, n_days), index=index, name='industry'),
        stage=Stage.RAW,
    )
    return panel, tuple(names[:spec.n_signal])
