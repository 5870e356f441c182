# backtest/strategy.py - Fusion of the network stock picker and the HMM timing signal

from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

import config
from dataio.observables import compute_observables
from factors.ic import compute_ic
from factors.pca import pca_fit, pca_transform
from factors.preprocessing import preprocess
from neural.network import NetworkShape
from neural.picker import predict_and_pick
from neural.samples import TrainingSet
from neural.swarm import SwarmConfig, pso_train
from regime.boxcox import boxcox_apply, boxcox_fit
from regime.hmm import baum_welch, viterbi
from regime.ranking import Signal, rank_states, timing_signal
from utils.errors import ConfigError, DataError, InsufficientDataError
from utils.seeding import derive_seed


@dataclass(frozen=True)
class Decision:
    signal: Signal
    candidates: tuple = ()
    state: int = None
    rank: int = None


@dataclass(frozen=True, eq=False)
class RegimeModel:
    transform: object       # BoxCoxTransform
    params: object          # MGHMMParams
    ranking: object         # StateRanking
    path: np.ndarray        # decoded training-window states
    dates: pd.DatetimeIndex
    trace: np.ndarray

    @property
    def first_date(self):
        return self.dates[0]

    def decode(self, observables):
        """States for observables starting at the training window's first date."""
        z = boxcox_apply(self.transform, observables, clip=True).to_numpy()
        return viterbi(self.params, z)

    def state_frame(self, path=None, dates=None):
        path = self.path if path is None else path
        dates = self.dates if dates is None else dates
        ranking = self.ranking
        return pd.DataFrame({
            'date': dates,
            'state': path,
            'rank': [ranking.rank_of(s) for s in path],
            'signal': [timing_signal(ranking, s).value for s in path],
        })


@dataclass(frozen=True, eq=False)
class PickerModel:
    selected: tuple
    pca: object
    net: object
    shape: NetworkShape
    ic_report: object = None
    trace: np.ndarray = None

    def reduce(self, rows):
        features = rows[list(self.selected)]
        return pd.DataFrame(pca_transform(self.pca, features), index=features.index)

    def pick(self, rows, n_pick):
        return predict_and_pick(self.net, self.shape, self.reduce(rows), n_pick)


def stock_returns(closes):
    """(date, stock_id)-indexed simple returns from a dates x stocks close table."""
    returns = closes.pct_change(fill_method=None).stack(future_stack=True).dropna()
    returns.index.names = ['date', 'stock_id']
    return returns


def forward_returns(returns):
    """Next-day return aligned to the current (date, stock_id) row."""
    return returns.groupby(level='stock_id').shift(-1)


def fit_regime(observables, index_returns, options, seed):
    """
    Box-Cox, Baum-Welch, Viterbi and state ranking over one training window.

    The last day's next return is unknown at its close, so ranking uses all
    but the final decoded state.
    """
    transform = boxcox_fit(observables)
    z = boxcox_apply(transform, observables).to_numpy()
    params, trace = baum_welch(
        z, options['n_states'], seed=seed, tol=options['tol'], max_iter=options['max_iter'],
        restarts=options['restarts'], cov_floor=options['cov_floor'], self_transition=options['self_transition'])
    path = viterbi(params, z)
    next_returns = index_returns.shift(-1).reindex(observables.index).to_numpy()[:-1]
    ranking = rank_states(path[:-1], np.nan_to_num(next_returns), options['n_states'])
    logger.debug(f"Regime model on {len(observables)} days: log-likelihood {trace[-1]:.3f}, "
                 f"totals {np.round(ranking.totals, 4).tolist()}")
    return RegimeModel(transform, params, ranking, path, observables.index, trace)


def fit_picker(window, ic_returns, targets, shape, k_select, swarm_config, seed):
    """IC selection, PCA and swarm training on one standardized panel window."""
    report = compute_ic(window, ic_returns, k_select)
    features = window.values[list(report.selected)]
    pca = pca_fit(features, shape.k)
    reduced = pd.DataFrame(pca_transform(pca, features), index=features.index)
    samples = TrainingSet.from_frames(reduced, targets)
    if len(samples) == 0:
        raise InsufficientDataError("no picker training rows with a known next-day return")
    net, trace = pso_train(samples, shape, swarm_config, seed)
    return PickerModel(report.selected, pca, net, shape, report, trace)


class ScriptedStrategy:
    """Replays decisions from a callable day index -> Decision."""

    def __init__(self, decide, start=0):
        self._decide = decide
        self.start = start
        self.warnings = []

    def prepare(self, data, params, seed):
        return self.start

    def decide(self, i):
        return self._decide(i)


class FusionStrategy:
    """
    Monthly retraining of both models on trailing windows, periodic picks and
    daily timing. All model inputs on day i use data up to the close of day i.
    """

    def __init__(self, swarm_config=None, shape=None, factor_options=None, regime_options=None):
        self.swarm_config = swarm_config or SwarmConfig()
        self.shape = shape or NetworkShape()
        self.factor_options = {**config.FACTOR_OPTIONS, **(factor_options or {})}
        self.regime_options = {**config.REGIME_OPTIONS, **(regime_options or {})}
        if self.shape.k > self.factor_options['k_select']:
            raise ConfigError(f"network input k={self.shape.k} exceeds k_select={self.factor_options['k_select']}")
        self.warnings = []

    def prepare(self, data, params, seed):
        if data.factors is None:
            raise DataError("the fusion strategy needs a factor panel")
        self.params = params
        self.seed = seed
        self.calendar = data.calendar
        self.days = self.calendar.days

        self.panel = preprocess(data.factors, self.factor_options['n_sigma'])
        self.warnings.extend(self.panel.warnings)
        self.stock_returns = stock_returns(data.table('close'))
        self.stock_forward = forward_returns(self.stock_returns)
        self.index_returns = data.index.frame['close'].pct_change()
        self.observables = compute_observables(data.index)

        self.start = self.first_trading_day()
        self.retrains = 0
        self.last_retrain = None
        self.regime = None
        self.picker = None
        self.candidates = ()
        self.timing = (None, None, Signal.FLAT)
        return self.start

    def first_trading_day(self):
        """First month start with a full regime window and picker window behind it."""
        window = self.params.regime_train_window
        for i in self.calendar.month_starts:
            if self.calendar.months_between(0, i) >= window and i > self.params.picker_train_window:
                logger.info(f"Warm-up: trading starts {self.days[i].date()} after {window} months of history")
                return int(i)
        raise InsufficientDataError(
            f"data spans {self.calendar.months_between(0, len(self.days) - 1)} months; "
            f"need more than {window} months of history")

    def decide(self, i):
        if self._due_for_training(i):
            self.retrain(i)
        if (i - self.start) % self.params.picking_cycle == 0:
            self.candidates = self.pick(i)
        if (i - self.start) % self.params.timing_cycle == 0:
            self.timing = self.time(i)
        state, rank, signal = self.timing
        return Decision(signal, self.candidates, state, rank)

    def _due_for_training(self, i):
        if self.last_retrain is None:
            return True
        return (self.calendar.is_month_start(i)
                and self.calendar.months_between(self.last_retrain, i) >= self.params.training_cycle)

    def retrain(self, i):
        regime_seed = (derive_seed(self.seed, 'regime') + self.retrains) % 2 ** 63
        picker_seed = (derive_seed(self.seed, 'picker') + self.retrains) % 2 ** 63

        first = self.calendar.window_start(max(i - 1, 0), self.params.regime_train_window)
        observed = self.observables.loc[self.days[first]:self.days[i]]
        self.regime = fit_regime(observed, self.index_returns, self.regime_options, regime_seed)

        window = self.panel.window(self.days[max(i - self.params.picker_train_window, 0):i])
        if self.factor_options['ic_target'] == 'index':
            ic_returns = self.index_returns.dropna()
        else:
            ic_returns = self.stock_returns
        self.picker = fit_picker(window, ic_returns, self.stock_forward, self.shape,
                                 self.factor_options['k_select'], self.swarm_config, picker_seed)

        self.retrains += 1
        self.last_retrain = i
        logger.info(f"{self.days[i].date()}: retrained models (#{self.retrains}); "
                    f"factors {', '.join(self.picker.selected)}; "
                    f"long states {sorted(self.regime.ranking.top_two)}")

    def pick(self, i):
        rows = self.panel.cross_section(self.days[i])
        if rows.empty:
            self.warnings.append(f"{self.days[i].date()}: no factor rows; keeping no candidates")
            return ()
        result = self.picker.pick(rows, self.params.n_pick)
        if result.short:
            self.warnings.append(f"{self.days[i].date()}: only {len(result.stocks)} candidates")
        logger.debug(f"{self.days[i].date()}: picked {', '.join(result.stocks)}")
        return result.stocks

    def time(self, i):
        """Decode the state of day i and map it to long/flat."""
        observed = self.observables.loc[self.regime.first_date:self.days[i]]
        state = int(self.regime.decode(observed)[-1])
        ranking = self.regime.ranking
        return state, ranking.rank_of(state), timing_signal(ranking, state)
