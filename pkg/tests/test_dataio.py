import numpy as np
import pandas as pd
import pytest

from dataio.bars import load_bars, write_bars, write_stock_bars
from dataio.calendar import TradingCalendar
from dataio.factor_io import load_factor_panel, write_factor_panel
from dataio.observables import OBSERVABLE_COLUMNS, compute_observables, observation_rows
from dataio.vocabulary import FACTOR_VOCABULARY, factor_names
from utils.errors import DataError, DomainError, InsufficientDataError, ParseError, ValidationError

INDEX_HEADER = "date,open,high,low,close,volume,fsb\n"


def write(tmp_path, text, name='bars.csv'):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadBars:
    def test_single_valid_row(self, tmp_path):
        path = write(tmp_path, INDEX_HEADER + "2021-01-04,100,101,99,100.5,1e6,2e9\n")
        series = load_bars(path, 'index')
        assert len(series) == 1
        assert series.frame['close'].iloc[0] == 100.5

    def test_shuffled_dates_come_back_sorted(self, tmp_path):
        path = write(tmp_path, INDEX_HEADER
                     + "2021-01-06,100,101,99,100,1,1\n"
                     + "2021-01-04,100,101,99,100,1,1\n"
                     + "2021-01-05,100,101,99,100,1,1\n")
        dates = load_bars(path, 'index').dates
        assert list(dates.strftime('%Y-%m-%d')) == ['2021-01-04', '2021-01-05', '2021-01-06']

    def test_high_below_low_names_the_row(self, tmp_path):
        path = write(tmp_path, INDEX_HEADER
                     + "2021-01-04,100,101,99,100,1,1\n"
                     + "2021-01-05,100,98,99,100,1,1\n")
        with pytest.raises(ValidationError, match=r":3:"):
            load_bars(path, 'index')

    def test_unparseable_number_reports_line(self, tmp_path):
        path = write(tmp_path, INDEX_HEADER
                     + "2021-01-04,100,101,99,100,1,1\n"
                     + "2021-01-05,100,101,99,abc,1,1\n")
        with pytest.raises(ParseError) as excinfo:
            load_bars(path, 'index')
        assert excinfo.value.line == 3

    def test_wrong_header(self, tmp_path):
        path = write(tmp_path, "date,open,high,low,close\n2021-01-04,1,1,1,1\n")
        with pytest.raises(ParseError) as excinfo:
            load_bars(path, 'index')
        assert excinfo.value.line == 1

    def test_duplicate_date(self, tmp_path):
        path = write(tmp_path, INDEX_HEADER
                     + "2021-01-04,100,101,99,100,1,1\n"
                     + "2021-01-04,100,101,99,100,1,1\n")
        with pytest.raises(ValidationError, match='duplicate'):
            load_bars(path, 'index')

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_bars(tmp_path / 'nope.csv', 'index')

    def test_written_bars_load_back(self, tmp_path, small_market):
        path = write_bars(small_market.index, tmp_path / 'index.csv')
        loaded = load_bars(path, 'index')
        assert loaded.equals(small_market.index)

    def test_written_stock_bars_load_back_exactly(self, tmp_path, small_market):
        loaded = load_bars(write_stock_bars(small_market.stocks, tmp_path / 'stocks.csv'), 'stock')
        assert all(loaded[s].equals(small_market.stocks[s]) for s in small_market.stocks)

    def test_full_precision_cells_parse_exactly(self, tmp_path):
        path = write(tmp_path, INDEX_HEADER + "2021-01-04,3010.3349573945286,3027.1940113580906,"
                     "2994.0208305434063,3001.8815471227594,1234567.8912345678,0.30000000000000004\n")
        frame = load_bars(path, 'index').frame
        assert frame['open'].iloc[0] == 3010.3349573945286
        assert frame['fsb'].iloc[0] == 0.30000000000000004

    def test_stock_file_groups_by_id(self, tmp_path, small_market):
        path = write_stock_bars(small_market.stocks, tmp_path / 'stocks.csv')
        loaded = load_bars(path, 'stock')
        assert sorted(loaded) == sorted(small_market.stocks)
        first = sorted(loaded)[0]
        assert loaded[first].stock_id == first
        assert len(loaded[first]) == len(small_market.stocks[first])


class TestObservables:
    def test_drops_lookback_rows(self, index_bars_factory):
        bars = index_bars_factory(np.linspace(100, 120, 20))
        observed = compute_observables(bars)
        assert len(observed) == 15
        assert list(observed.columns) == OBSERVABLE_COLUMNS
        assert observed.index[0] == bars.dates[5]

    def test_constant_close_gives_zero_returns(self, index_bars_factory):
        observed = compute_observables(index_bars_factory(np.full(10, 100.0)))
        assert (observed['dlr'] == 0).all()
        assert (observed['fdlr'] == 0).all()

    def test_ten_percent_day(self, index_bars_factory):
        observed = compute_observables(index_bars_factory([100.0] * 6 + [110.0]))
        assert observed['dlr'].iloc[-1] == pytest.approx(0.0953102, abs=1e-7)

    def test_five_day_return_is_sum_of_daily(self, index_bars_factory, rng):
        closes = 100 * np.exp(np.cumsum(rng.normal(0, 0.01, 30)))
        observed = compute_observables(index_bars_factory(closes))
        rolling = np.log(closes[5:]) - np.log(closes[:-5])
        np.testing.assert_allclose(observed['fdlr'].to_numpy(), rolling, atol=1e-12)

    def test_high_equal_low(self, index_bars_factory):
        bars = index_bars_factory(np.full(8, 100.0))
        bars.frame.loc[bars.dates[-1], ['high', 'low']] = 100.0
        assert compute_observables(bars)['dlshlp'].iloc[-1] == 0.0

    def test_fsb_growth(self, index_bars_factory):
        fsb = 1e9 * np.exp(0.01 * np.arange(10))
        observed = compute_observables(index_bars_factory(np.full(10, 100.0), fsb=fsb))
        np.testing.assert_allclose(observed['lgrfsb'].to_numpy(), 0.01, atol=1e-12)

    def test_too_few_bars(self, index_bars_factory):
        with pytest.raises(InsufficientDataError):
            compute_observables(index_bars_factory(np.full(5, 100.0)))

    def test_non_positive_balance(self, index_bars_factory):
        with pytest.raises(DomainError):
            compute_observables(index_bars_factory(np.full(8, 100.0), fsb=np.zeros(8)))

    def test_rows_as_tuples(self, index_bars_factory):
        rows = observation_rows(compute_observables(index_bars_factory(np.full(8, 100.0))))
        assert len(rows) == 3
        assert rows[0].tv == 1.0e6


class TestTradingCalendar:
    def test_month_boundaries(self):
        calendar = TradingCalendar(pd.bdate_range('2021-01-25', '2021-03-05'))
        starts = calendar.days[calendar.month_starts]
        assert list(starts.strftime('%Y-%m-%d')) == ['2021-01-25', '2021-02-01', '2021-03-01']
        assert calendar.is_month_start(calendar.index_of('2021-02-01'))
        assert not calendar.is_month_start(calendar.index_of('2021-02-02'))

    def test_trailing_window(self):
        calendar = TradingCalendar(pd.bdate_range('2021-01-04', '2021-06-30'))
        i = calendar.index_of('2021-05-14')
        assert calendar[calendar.window_start(i, 3)] == pd.Timestamp('2021-03-01')
        assert calendar.months_between(0, i) == 4

    def test_rejects_unsorted_days(self):
        with pytest.raises(ValidationError):
            TradingCalendar(pd.DatetimeIndex(['2021-01-05', '2021-01-04']))


class TestFactorFiles:
    def test_nulls_survive_the_round_trip(self, tmp_path, panel_factory, rng):
        panel = panel_factory(rng)
        values = panel.values.copy()
        values.iloc[2, 1] = np.nan
        panel = panel.evolve(values, panel.stage)
        loaded = load_factor_panel(write_factor_panel(panel, tmp_path / 'factors.csv'))
        assert loaded.has_nulls()
        assert loaded.factor_names == panel.factor_names
        assert np.isnan(loaded.values.iloc[2, 1])

    def test_bad_header(self, tmp_path):
        path = write(tmp_path, "date,stock,mktcap,industry,f0\n2021-01-04,S1,1,A,0.1\n", 'factors.csv')
        with pytest.raises(ParseError):
            load_factor_panel(path)

    def test_non_numeric_factor_cell(self, tmp_path):
        path = write(tmp_path, "date,stock_id,mktcap,industry,f0\n"
                               "2021-01-04,S1,1,A,0.1\n"
                               "2021-01-04,S2,1,A,oops\n", 'factors.csv')
        with pytest.raises(ParseError) as excinfo:
            load_factor_panel(path)
        assert excinfo.value.line == 3


def test_factor_vocabulary():
    assert len(FACTOR_VOCABULARY) == 52
    assert factor_names(52)[-1] == 'CashToCurrentLiability'
    assert factor_names(54)[-2:] == ['F053', 'F054']
    assert factor_names(3) == ['RVI', 'OBV', 'Hurst']
