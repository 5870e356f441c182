# backtest/portfolio.py - Cash, positions and the fill log

import math
from dataclasses import asdict, dataclass

import pandas as pd

from backtest.params import TradeParams

FILL_COLUMNS = ['date', 'stock_id', 'side', 'shares', 'raw_price', 'exec_price', 'fee']
BUY = 'buy'
SELL = 'sell'


@dataclass(frozen=True)
class Fill:
    date: pd.Timestamp
    stock_id: str
    side: str
    shares: float
    raw_price: float
    exec_price: float
    fee: float

    @property
    def notional(self):
        return self.shares * self.exec_price

    @property
    def cash_delta(self):
        if self.side == BUY:
            return -(self.notional + self.fee)
        return self.notional - self.fee


class Portfolio:
    """Long-only book; shares are whole numbers unless params.fractional_shares is set."""

    def __init__(self, params=None):
        self.params = params or TradeParams()
        self.cash = float(self.params.initial_capital)
        self.positions = {}
        self.fills = []

    def holds(self, stock_id):
        return self.positions.get(stock_id, 0) > 0

    def _shares(self, amount):
        if self.params.fractional_shares:
            return amount
        return math.floor(amount)

    def buy(self, date, stock_id, open_price, budget):
        """Spend up to `budget` (fee included) at open + slippage. Returns the Fill or None."""
        exec_price = open_price + self.params.slippage
        shares = self._shares(budget / (exec_price * (1.0 + self.params.buy_cost)))
        if shares <= 0:
            return None
        notional = shares * exec_price
        fee = notional * self.params.buy_cost
        fill = Fill(pd.Timestamp(date), stock_id, BUY, shares, open_price, exec_price, fee)
        self.cash -= notional + fee
        self.positions[stock_id] = self.positions.get(stock_id, 0) + shares
        self.fills.append(fill)
        return fill

    def sell(self, date, stock_id, open_price, fraction=None):
        """Sell `fraction` of the position at open - slippage. Returns the Fill or None."""
        held = self.positions.get(stock_id, 0)
        fraction = self.params.sell_fraction if fraction is None else fraction
        shares = held if fraction >= 1.0 else self._shares(held * fraction)
        if shares <= 0:
            return None
        exec_price = max(open_price - self.params.slippage, 0.0)
        notional = shares * exec_price
        fee = notional * self.params.sell_cost
        fill = Fill(pd.Timestamp(date), stock_id, SELL, shares, open_price, exec_price, fee)
        self.cash += notional - fee
        remaining = held - shares
        if remaining > 0:
            self.positions[stock_id] = remaining
        else:
            del self.positions[stock_id]
        self.fills.append(fill)
        return fill

    def market_value(self, prices):
        return float(sum(shares * prices[stock_id] for stock_id, shares in self.positions.items()))

    def equity(self, prices):
        return self.cash + self.market_value(prices)


def fills_frame(fills):
    if not fills:
        return pd.DataFrame(columns=FILL_COLUMNS)
    frame = pd.DataFrame([asdict(fill) for fill in fills])[FILL_COLUMNS]
    frame['date'] = pd.to_datetime(frame['date'])
    return frame


def reconcile_equity(fills, closes, initial_capital):
    """
    Rebuild daily equity from the fill log alone.

    Args:
        fills: Fill sequence
        closes: Dates x stocks close table (already forward filled)
        initial_capital: Starting cash

    Returns:
        Series of cash + marked positions per date
    """
    dates = closes.index
    cash_flow = pd.Series(0.0, index=dates)
    holdings = pd.DataFrame(0.0, index=dates, columns=closes.columns)
    for fill in fills:
        cash_flow.loc[fill.date] += fill.cash_delta
        signed = fill.shares if fill.side == BUY else -fill.shares
        holdings.loc[fill.date, fill.stock_id] += signed
    cash = initial_capital + cash_flow.cumsum()
    shares = holdings.cumsum()
    marked = (shares * closes.fillna(0.0)).where(shares != 0, 0.0)
    return (cash + marked.sum(axis=1)).rename('equity')
