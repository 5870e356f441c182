import numpy as np
import pytest

from backtest.engine import MarketData
from backtest.strategy import stock_returns
from dataio.observables import compute_observables
from dataio.synthetic import INDEX_START_PRICE, RegimeSpec, SyntheticSpec, _bars_from_returns, generate_synthetic, regime_chain
from factors.ic import compute_ic
from factors.panel import Stage
from factors.preprocessing import preprocess
from utils.errors import ValidationError


def test_same_seed_is_bit_identical():
    spec = SyntheticSpec(seed=3, n_days=120, n_stocks=5, n_factors=6)
    first, second = generate_synthetic(spec), generate_synthetic(spec)
    assert first.index.equals(second.index)
    assert all(first.stocks[s].equals(second.stocks[s]) for s in first.stocks)
    assert first.factors.values.equals(second.factors.values)
    assert first.regime_path.equals(second.regime_path)


def test_single_series_opens_at_start_price(rng):
    opened, high, low, close = _bars_from_returns(np.zeros(4), INDEX_START_PRICE, np.zeros(4), rng)
    assert opened.shape == close.shape == (4,)
    assert np.all(opened == INDEX_START_PRICE)
    assert np.all(high >= np.maximum(opened, close)) and np.all(low <= np.minimum(opened, close))


def test_each_stock_opens_at_its_own_start_price(rng):
    starts = np.array([10.0, 50.0, 90.0])
    opened, _, _, close = _bars_from_returns(np.zeros((3, 3)), starts, np.zeros((3, 3)), rng)
    assert opened.shape == (3, 3)
    np.testing.assert_array_equal(opened[0], starts)
    np.testing.assert_array_equal(close[-1], starts)


def test_index_first_open_is_near_start_price():
    market = generate_synthetic(SyntheticSpec(seed=2, n_days=30, n_stocks=3, n_factors=4, n_signal=1))
    assert len(market.index) == 30
    assert market.index.frame['open'].iloc[0] == pytest.approx(INDEX_START_PRICE, rel=0.1)


def test_sizes(small_market, small_spec):
    assert len(small_market.index) == small_spec.n_days
    assert len(small_market.stocks) == small_spec.n_stocks
    assert small_market.factors.stage == Stage.RAW
    assert len(small_market.factors) == small_spec.n_days * small_spec.n_stocks
    assert small_market.signal_factors == tuple(small_market.factors.factor_names[:2])
    assert sorted(small_market.stocks)[0] == 'S0001'


def test_two_regimes_appear(small_market):
    assert set(np.unique(small_market.regime_path)) == {0, 1}


def test_flat_regime_gives_constant_close():
    spec = SyntheticSpec(seed=1, n_days=50, n_stocks=2, n_factors=2, n_signal=0,
                         regimes=({'drift': 0.0, 'volatility': 0.0, 'duration': 10},))
    close = generate_synthetic(spec).index.frame['close']
    assert np.allclose(close, close.iloc[0], rtol=0, atol=1e-9)


def test_drift_matches_regime():
    spec = SyntheticSpec(seed=5, n_days=3000, n_stocks=2, n_factors=2, n_signal=0)
    market = generate_synthetic(spec)
    dlr = compute_observables(market.index)['dlr']
    truth = market.regime_path.loc[dlr.index]
    for label, regime in enumerate(spec.regimes):
        sample = dlr[truth == label]
        standard_error = sample.std(ddof=1) / np.sqrt(len(sample))
        assert abs(sample.mean() - regime.drift) < 3 * standard_error + 1e-4


def test_regime_chain_respects_single_regime(rng):
    spec = SyntheticSpec(n_days=40, regimes=({'drift': 0.0, 'volatility': 0.01, 'duration': 5},))
    assert (regime_chain(spec, rng) == 0).all()


def test_planted_signal_factor_ranks_first(small_market):
    data = MarketData(small_market.index, small_market.stocks, small_market.factors)
    report = compute_ic(preprocess(small_market.factors), stock_returns(data.table('close')), k=6)
    assert report.selected[0] == small_market.signal_factors[0]


def test_spec_json_round_trip(tmp_path):
    spec = SyntheticSpec(seed=9, n_days=42, regimes=(
        {'drift': 0.001, 'volatility': 0.01, 'duration': 20, 'volume_level': 2.0},
        {'drift': -0.001, 'volatility': 0.03, 'duration': 10},
    ))
    loaded = SyntheticSpec.from_json(spec.to_json(tmp_path / 'spec.json'))
    assert loaded == spec
    assert loaded.regimes[1].fsb_drift == pytest.approx(-0.0005)


@pytest.mark.parametrize('changes', [
    {'n_signal': 11, 'n_factors': 10},
    {'n_days': 0},
    {'null_rate': 1.0},
    {'regimes': ()},
])
def test_invalid_spec(changes):
    with pytest.raises(ValidationError):
        SyntheticSpec(**changes)


def test_invalid_regime():
    with pytest.raises(ValidationError):
        RegimeSpec(drift=0.0, volatility=-0.1, duration=5)
    with pytest.raises(ValidationError):
        RegimeSpec(drift=0.0, volatility=0.1, duration=0.5)
