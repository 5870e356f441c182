# backtest/metrics.py - Performance metrics of an equity curve against its benchmark

from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

from backtest.params import TradeParams
from utils.errors import InsufficientDataError, UndefinedMetricError, ValidationError

METRIC_FIELDS = (
    'annualized_return',
    'alpha',
    'beta',
    'sharpe_ratio',
    'volatility',
    'information_ratio',
    'max_drawdown',
    'annualized_turnover_rate',
)


@dataclass(frozen=True)
class MetricsReport:
    annualized_return: float
    alpha: float
    beta: float
    sharpe_ratio: float
    volatility: float
    information_ratio: float
    max_drawdown: float
    annualized_turnover_rate: float
    undefined: tuple = ()       # metric names left as None
    n_days: int = 0
    start: str = None
    end: str = None

    def to_dict(self):
        data = asdict(self)
        data['undefined'] = list(self.undefined)
        return data


def max_drawdown(curve):
    """Largest peak-to-trough decline as a fraction of the running peak."""
    values = np.asarray(curve, dtype=float)
    if values.size == 0:
        raise InsufficientDataError("max_drawdown needs a non-empty curve")
    peaks = np.maximum.accumulate(values)
    return float(np.max((peaks - values) / peaks))


def annualized(levels, periods_per_year):
    levels = np.asarray(levels, dtype=float)
    days = len(levels) - 1
    return float((levels[-1] / levels[0]) ** (periods_per_year / days) - 1.0)


def compute_metrics(curve, benchmark, params=None, fills=()):
    """
    Args:
        curve: Equity series
        benchmark: Benchmark series on the same dates
        params: TradeParams (risk-free rate, periods per year)
        fills: Fill log for the turnover rate

    Returns:
        MetricsReport; ratios with a zero denominator are None and listed in `undefined`
    """
    params = params or TradeParams()
    curve = pd.Series(curve, dtype=float)
    benchmark = pd.Series(benchmark, dtype=float)
    if not curve.index.equals(benchmark.index):
        raise ValidationError("curve and benchmark must share dates")
    if len(curve) < 2:
        raise InsufficientDataError("metrics need at least 2 points")

    year = params.periods_per_year
    rf = params.risk_free_rate
    r = curve.pct_change().iloc[1:].to_numpy()
    b = benchmark.pct_change().iloc[1:].to_numpy()

    var_b = np.var(b, ddof=1) if len(b) > 1 else 0.0
    if not var_b > 0:
        raise UndefinedMetricError("beta undefined: benchmark returns have zero variance")
    beta = float(np.cov(r, b, ddof=1)[0, 1] / var_b)

    ann_r = annualized(curve, year)
    ann_b = annualized(benchmark, year)
    alpha = ann_r - rf - beta * (ann_b - rf)

    undefined = []
    volatility = float(np.std(r, ddof=1) * np.sqrt(year))
    sharpe = None
    if volatility > 0:
        sharpe = (ann_r - rf) / volatility
    else:
        undefined.append('sharpe_ratio')

    active = r - b
    tracking = float(np.std(active, ddof=1) * np.sqrt(year))
    information_ratio = None
    if tracking > 0:
        information_ratio = float(np.mean(active) * year / tracking)
    else:
        undefined.append('information_ratio')

    traded = sum(fill.shares * fill.exec_price for fill in fills)
    turnover = float(traded / curve.mean() * year / len(r))

    return MetricsReport(
        annualized_return=ann_r,
        alpha=float(alpha),
        beta=beta,
        sharpe_ratio=sharpe,
        volatility=volatility,
        information_ratio=information_ratio,
        max_drawdown=max_drawdown(curve),
        annualized_turnover_rate=turnover,
        undefined=tuple(undefined),
        n_days=len(curve),
        start=str(pd.Timestamp(curve.index[0]).date()) if isinstance(curve.index, pd.DatetimeIndex) else None,
        end=str(pd.Timestamp(curve.index[-1]).date()) if isinstance(curve.index, pd.DatetimeIndex) else None,
    )


def metrics_by_year(curve, benchmark, params=None, fills=()):
    """
    Metrics per calendar year; each year is measured from the previous year's
    last close. Years too short or with a flat benchmark map to None.
    """
    params = params or TradeParams()
    results = {}
    years = curve.index.year
    for year in sorted(set(years)):
        positions = np.flatnonzero(years == year)
        start = max(positions[0] - 1, 0)
        window = slice(start, positions[-1] + 1)
        year_fills = [fill for fill in fills if fill.date.year == year]
        try:
            results[int(year)] = compute_metrics(curve.iloc[window], benchmark.iloc[window], params, year_fills)
        except (InsufficientDataError, UndefinedMetricError):
            results[int(year)] = None
    return results
