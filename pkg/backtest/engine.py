# backtest/engine.py - Daily event loop: decide at the close, trade at the next open, mark at the close

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from loguru import logger

from backtest.metrics import compute_metrics, metrics_by_year
from backtest.params import TradeParams
from backtest.portfolio import Portfolio
from backtest.strategy import FusionStrategy
from dataio.bars import close_table
from dataio.calendar import TradingCalendar
from regime.ranking import Signal

EQUITY_COLUMNS = ['date', 'equity', 'benchmark']
STATE_COLUMNS = ['date', 'state', 'rank', 'signal']


@dataclass(frozen=True, eq=False)
class MarketData:
    index: object           # BarSeries with kind 'index'
    stocks: dict            # stock_id -> BarSeries
    factors: object = None  # raw FactorPanel

    @property
    def calendar(self):
        return TradingCalendar(self.index.dates)

    def table(self, field_name):
        return close_table(self.stocks, field_name).reindex(self.index.dates)


@dataclass(frozen=True, eq=False)
class BacktestResult:
    curve: pd.DataFrame             # indexed by date: equity, benchmark
    fills: list
    metrics: object
    yearly: dict
    states: pd.DataFrame            # date, state, rank, signal
    warnings: tuple = field(default=())

    def equity_frame(self):
        return self.curve.reset_index()[EQUITY_COLUMNS]


def execute(portfolio, decision, date, opens, warnings):
    """Turn yesterday's decision into fills at today's open."""
    params = portfolio.params

    def price_of(stock_id):
        price = opens.get(stock_id, np.nan)
        if not np.isfinite(price):
            message = f"{date.date()}: no open price for {stock_id}; order skipped"
            logger.warning(message)
            warnings.append(message)
            return None
        return float(price)

    keep = set(decision.candidates) if decision.signal == Signal.LONG else set()
    for stock_id in sorted(portfolio.positions):
        if stock_id not in keep:
            price = price_of(stock_id)
            if price is not None:
                portfolio.sell(date, stock_id, price)

    if decision.signal != Signal.LONG:
        return
    for stock_id in decision.candidates:
        if portfolio.holds(stock_id):
            continue
        price = price_of(stock_id)
        if price is not None:
            portfolio.buy(date, stock_id, price, params.buy_fraction * portfolio.cash)


def run_backtest(data, params=None, seed=0, strategy=None):
    """
    Simulate the strategy day by day.

    Args:
        data: MarketData
        params: TradeParams
        seed: Global seed handed to the strategy
        strategy: Object with prepare(data, params, seed) -> first day index
                  and decide(i) -> Decision; the fusion strategy by default

    Returns:
        BacktestResult
    """
    params = params or TradeParams()
    strategy = strategy or FusionStrategy()
    calendar = data.calendar
    start = strategy.prepare(data, params, seed)

    opens = data.table('open')
    closes = data.table('close').ffill()
    portfolio = Portfolio(params)
    warnings = []
    equity = []
    states = []
    pending = None

    for i in range(start, len(calendar)):
        date = calendar[i]
        if pending is not None:
            execute(portfolio, pending, date, opens.loc[date], warnings)
        equity.append(portfolio.equity(closes.loc[date].fillna(0.0)))
        pending = strategy.decide(i)
        states.append((date, pending.state, pending.rank, pending.signal.value))

    dates = calendar.days[start:]
    index_close = data.index.frame['close'].loc[dates]
    curve = pd.DataFrame({
        'equity': equity,
        'benchmark': params.initial_capital * index_close.to_numpy() / index_close.iloc[0],
    }, index=dates)
    metrics = compute_metrics(curve['equity'], curve['benchmark'], params, portfolio.fills)
    yearly = metrics_by_year(curve['equity'], curve['benchmark'], params, portfolio.fills)
    logger.info(f"Backtest {dates[0].date()}..{dates[-1].date()}: {len(portfolio.fills)} fills, "
                f"final equity {equity[-1]:,.2f}")
    return BacktestResult(
        curve=curve,
        fills=list(portfolio.fills),
        metrics=metrics,
        yearly=yearly,
        states=pd.DataFrame(states, columns=STATE_COLUMNS),
        warnings=tuple(strategy_warnings(strategy)) + tuple(warnings),
    )


def strategy_warnings(strategy):
    return getattr(strategy, 'warnings', ())
