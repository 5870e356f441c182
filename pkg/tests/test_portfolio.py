import numpy as np
import pandas as pd
import pytest

from backtest.params import TradeParams
from backtest.portfolio import BUY, SELL, FILL_COLUMNS, Portfolio, fills_frame, reconcile_equity
from utils.errors import ValidationError

DAY = pd.Timestamp('2021-03-01')


class TestBuy:
    def test_whole_shares_within_budget(self):
        book = Portfolio(TradeParams())
        fill = book.buy(DAY, 'S0001', 100.0, 3_000_000.0)
        assert fill.shares == 29985
        assert fill.exec_price == pytest.approx(100.02)
        assert fill.fee == pytest.approx(29985 * 100.02 * 0.0003, rel=1e-12)
        assert book.cash == pytest.approx(10_000_000.0 - fill.notional - fill.fee, rel=1e-15)
        assert fill.notional + fill.fee <= 3_000_000.0

    def test_budget_below_one_share(self):
        book = Portfolio(TradeParams())
        assert book.buy(DAY, 'S0001', 100.0, 50.0) is None
        assert book.fills == []
        assert book.cash == 10_000_000.0

    def test_fractional_spends_whole_budget(self):
        book = Portfolio(TradeParams(fractional_shares=True))
        fill = book.buy(DAY, 'S0001', 10.0, 1000.0)
        assert fill.notional + fill.fee == pytest.approx(1000.0, rel=1e-12)


class TestSell:
    def test_closes_position_with_costs(self):
        book = Portfolio(TradeParams())
        bought = book.buy(DAY, 'S0001', 50.0, 100_000.0)
        sold = book.sell(DAY + pd.Timedelta(days=1), 'S0001', 55.0)
        assert sold.side == SELL
        assert sold.shares == bought.shares
        assert sold.exec_price == pytest.approx(54.98)
        assert sold.fee == pytest.approx(sold.notional * 0.0013, rel=1e-12)
        assert not book.holds('S0001')
        assert book.cash == pytest.approx(10_000_000.0 + bought.cash_delta + sold.cash_delta, rel=1e-15)

    def test_partial_sell(self):
        book = Portfolio(TradeParams())
        book.buy(DAY, 'S0001', 10.0, 10_000.0)
        held = book.positions['S0001']
        book.sell(DAY, 'S0001', 10.0, fraction=0.5)
        assert book.positions['S0001'] == held - held // 2

    def test_nothing_held(self):
        assert Portfolio().sell(DAY, 'S0001', 10.0) is None


def test_equity_marks_positions():
    book = Portfolio(TradeParams(slippage=0.0, buy_cost=0.0))
    book.buy(DAY, 'A', 10.0, 1000.0)
    assert book.equity({'A': 12.0}) == pytest.approx(10_000_000.0 + 100 * 2.0)


def test_fills_frame_columns():
    book = Portfolio()
    book.buy(DAY, 'A', 10.0, 1000.0)
    frame = fills_frame(book.fills)
    assert list(frame.columns) == FILL_COLUMNS
    assert frame.loc[0, 'side'] == BUY
    assert list(fills_frame([]).columns) == FILL_COLUMNS


def test_reconcile_matches_book():
    dates = pd.bdate_range('2021-03-01', periods=4)
    closes = pd.DataFrame({'A': [10.0, 11.0, 9.0, 12.0], 'B': [5.0, 5.5, 6.0, 6.5]}, index=dates)
    book = Portfolio()
    marks = []
    book.buy(dates[0], 'A', 10.0, 50_000.0)
    marks.append(book.equity(closes.loc[dates[0]]))
    book.buy(dates[1], 'B', 5.5, 20_000.0)
    marks.append(book.equity(closes.loc[dates[1]]))
    book.sell(dates[2], 'A', 9.5)
    marks.append(book.equity(closes.loc[dates[2]]))
    marks.append(book.equity(closes.loc[dates[3]]))
    rebuilt = reconcile_equity(book.fills, closes, 10_000_000.0)
    np.testing.assert_allclose(rebuilt.to_numpy(), marks, rtol=1e-12)


@pytest.mark.parametrize('changes', [
    {'initial_capital': 0.0},
    {'buy_cost': 1.0},
    {'sell_fraction': 0.0},
    {'n_pick': 0},
    {'slippage': -0.01},
])
def test_invalid_params(changes):
    with pytest.raises(ValidationError):
        TradeParams(**changes)
