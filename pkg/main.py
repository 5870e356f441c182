# main.py - Command-line entry point for the fusion picking/timing toolkit

import functools
import sys
from pathlib import Path

import click
import pandas as pd
from loguru import logger

from analysis.plots import save_equity_svg
from analysis.report import build_report, write_report
from backtest.engine import MarketData, run_backtest
from backtest.portfolio import fills_frame
from backtest.strategy import FusionStrategy, fit_picker, fit_regime, forward_returns, stock_returns
from dataio.bars import load_bars, write_bars, write_stock_bars
from dataio.calendar import TradingCalendar
from dataio.factor_io import load_factor_panel, write_factor_panel
from dataio.observables import compute_observables
from dataio.synthetic import generate_synthetic
from factors.ic import compute_ic
from factors.pca import pca_fit, pca_transform
from factors.preprocessing import preprocess
from neural.network import network_to_dict
from neural.samples import TrainingSet
from neural.search import hyperparameter_search
from settings import load_run_config
from utils.errors import ConfigError, DataError, FusionError
from utils.jsonio import write_json
from utils.logging_setup import setup_logging
from utils.seeding import derive_seed


class FusionPipeline:
    """Loads (or synthesizes) market data once and runs each pipeline stage against it."""

    def __init__(self, run_config):
        self.config = run_config
        self.out_dir = Path(run_config.output_dir)
        self._market = None
        self._synthetic = None
        self._panel = None

    # -- data -------------------------------------------------------------

    def output(self, name):
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise DataError(f"cannot create output directory {self.out_dir}: {exc}") from None
        return self.out_dir / name

    def synthetic(self):
        if self.config.synthetic is None:
            raise ConfigError("no synthetic spec in the config")
        if self._synthetic is None:
            self._synthetic = generate_synthetic(self.config.synthetic)
        return self._synthetic

    @property
    def market(self):
        if self._market is None:
            if self.config.uses_files:
                paths = self.config.data
                logger.info(f"Loading market data from {paths['index']}, {paths['stocks']}, {paths['factors']}")
                self._market = MarketData(
                    index=load_bars(paths['index'], 'index'),
                    stocks=load_bars(paths['stocks'], 'stock'),
                    factors=load_factor_panel(paths['factors']),
                )
            else:
                market = self.synthetic()
                self._market = MarketData(index=market.index, stocks=market.stocks, factors=market.factors)
        return self._market

    @property
    def panel(self):
        if self._panel is None:
            self._panel = preprocess(self.market.factors, self.config.factors['n_sigma'])
        return self._panel

    def ic_returns(self):
        """Returns the IC is measured against, per the configured target."""
        if self.config.factors['ic_target'] == 'index':
            return self.market.index.frame['close'].pct_change().dropna()
        return stock_returns(self.market.table('close'))

    # -- stages -----------------------------------------------------------

    def synth(self):
        market = self.synthetic()
        written = [
            write_bars(market.index, self.output('index.csv')),
            write_stock_bars(market.stocks, self.output('stocks.csv')),
            write_factor_panel(market.factors, self.output('factors.csv')),
        ]
        regimes = market.regime_path.rename('regime').reset_index()
        regimes['date'] = regimes['date'].dt.strftime('%Y-%m-%d')
        regimes.to_csv(self.output('regimes.csv'), index=False)
        self.config.synthetic.to_json(self.output('synthetic_spec.json'))
        written += [self.output('regimes.csv'), self.output('synthetic_spec.json')]
        return written

    def preprocess(self):
        return [write_factor_panel(self.panel, self.output('factors_standardized.csv'))]

    def ic(self, k=None):
        report = compute_ic(self.panel, self.ic_returns(), k or self.config.factors['k_select'])
        return [report.to_csv(self.output('ic_report.csv'))]

    def picker_windows(self):
        days = TradingCalendar(self.panel.dates).days
        search = self.config.search
        train_days, test_days = search['train_days'], search['test_days']
        if len(days) < train_days + test_days + 1:
            raise DataError(f"need {train_days + test_days + 1} factor dates, got {len(days)}")
        # The final date has no next-day return
        test = days[-test_days - 1:-1]
        train = days[-test_days - train_days - 1:-test_days - 1]
        return train, test

    def train_picker(self, search=False):
        cfg = self.config
        shape, k_select = cfg.network, cfg.factors['k_select']
        seed = derive_seed(cfg.seed, 'picker')
        targets = forward_returns(stock_returns(self.market.table('close')))
        written = []

        if search:
            train, test = self.picker_windows()
            result = self.search(train, test, targets)
            written.append(self.output('search.csv'))
            result.table.to_csv(written[-1], index=False)
            shape, k_select = result.shape, result.k_select

        days = TradingCalendar(self.panel.dates).days
        window = self.panel.window(days[-cfg.trade.picker_train_window - 1:-1])
        model = fit_picker(window, self.ic_returns(), targets, shape, k_select, cfg.swarm, seed)
        written.append(model.ic_report.to_csv(self.output('ic_report.csv')))
        written.append(write_json(model.pca.to_dict(), self.output('pca.json')))
        written.append(write_json({**network_to_dict(model.net, shape), 'k_select': k_select,
                                   'factors': list(model.selected)}, self.output('network.json')))
        return written

    def search(self, train_dates, test_dates, targets):
        cfg = self.config
        index_close = self.market.index.frame['close']
        index_next = index_close.pct_change().shift(-1)
        ic_returns = self.ic_returns()

        def prepare(k_select, k):
            train_window = self.panel.window(train_dates)
            test_window = self.panel.window(test_dates)
            report = compute_ic(train_window, ic_returns, k_select)
            features = train_window.values[list(report.selected)]
            pca = pca_fit(features, k)
            train_set = TrainingSet.from_frames(
                pd.DataFrame(pca_transform(pca, features), index=features.index), targets)
            test_features = test_window.values[list(report.selected)]
            # Held-out error is measured against the next-day index return
            test_targets = pd.Series(
                index_next.reindex(test_features.index.get_level_values('date')).to_numpy(),
                index=test_features.index)
            test_set = TrainingSet.from_frames(
                pd.DataFrame(pca_transform(pca, test_features), index=test_features.index), test_targets)
            return train_set, test_set

        incumbent = {'n': cfg.network.n, 'k': cfg.network.k, 'a': cfg.network.a,
                     'k_select': cfg.factors['k_select']}
        return hyperparameter_search(train_dates, test_dates, cfg.search['grids'], prepare,
                                     cfg.swarm, derive_seed(cfg.seed, 'search'), defaults=incumbent)

    def train_regime(self):
        cfg = self.config
        observed = compute_observables(self.market.index)
        calendar = TradingCalendar(observed.index)
        last = len(calendar) - 1
        observed = observed.iloc[calendar.window_start(last, cfg.trade.regime_train_window):]
        index_returns = self.market.index.frame['close'].pct_change()
        model = fit_regime(observed, index_returns, cfg.regime, derive_seed(cfg.seed, 'regime'))

        states = model.state_frame()
        states['date'] = states['date'].dt.strftime('%Y-%m-%d')
        states.to_csv(self.output('states.csv'), index=False)
        return [
            write_json(model.params.to_dict(), self.output('hmm.json')),
            write_json(model.transform.to_dict(), self.output('boxcox.json')),
            self.output('states.csv'),
        ]

    def backtest(self):
        cfg = self.config
        strategy = FusionStrategy(cfg.swarm, cfg.network, cfg.factors, cfg.regime)
        result = run_backtest(self.market, cfg.trade, derive_seed(cfg.seed, 'backtest'), strategy)

        equity = result.equity_frame()
        equity['date'] = equity['date'].dt.strftime('%Y-%m-%d')
        equity.to_csv(self.output('equity.csv'), index=False, float_format='%.6f')
        fills = fills_frame(result.fills)
        if len(fills):
            fills['date'] = fills['date'].dt.strftime('%Y-%m-%d')
        fills.to_csv(self.output('fills.csv'), index=False, float_format='%.6f')
        states = result.states.copy()
        states['date'] = pd.to_datetime(states['date']).dt.strftime('%Y-%m-%d')
        states.to_csv(self.output('backtest_states.csv'), index=False)
        metrics = {
            'name': cfg.name,
            'overall': result.metrics.to_dict(),
            'yearly': {str(year): m.to_dict() if m else None for year, m in result.yearly.items()},
            'warnings': list(result.warnings),
        }
        return [
            self.output('equity.csv'),
            self.output('fills.csv'),
            write_json(metrics, self.output('metrics.json')),
            save_equity_svg(result.curve, self.output('equity.svg'), title=f"{cfg.name}: equity vs benchmark"),
            self.output('backtest_states.csv'),
        ]

    def report(self, paths):
        return list(write_report(build_report(paths), self.out_dir))


def command(func):
    """Build the pipeline from the group options and map FusionError to its exit code."""
    @click.pass_context
    @functools.wraps(func)
    def wrapper(ctx, *args, **kwargs):
        opts = ctx.obj
        try:
            run_config = load_run_config(opts['config'], seed=opts['seed'], out=opts['out'])
            pipeline = FusionPipeline(run_config)
            written = func(pipeline, *args, **kwargs)
        except FusionError as exc:
            logger.error(str(exc))
            ctx.exit(exc.exit_code)
        except Exception:
            logger.exception("Unexpected error")
            ctx.exit(1)
        for path in written:
            logger.info(f"Wrote {path}")
    return wrapper


@click.group()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='JSON run config (see docs/config.md).')
@click.option('--seed', type=int, default=None, help='Override the global seed.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
              help='Override the output directory.')
@click.option('--log-level', default='INFO', show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
@click.option('--log-file', type=click.Path(dir_okay=False), default=None)
@click.pass_context
def cli(ctx, config_path, seed, out_dir, log_level, log_file):
    """Factor picking with a swarm-trained network, HMM market timing and a daily backtest."""
    setup_logging(log_level, log_file)
    ctx.obj = {'config': config_path, 'seed': seed, 'out': out_dir}


@cli.command()
@command
def synth(pipeline):
    """Write synthetic index, stock, factor and regime CSVs."""
    return pipeline.synth()


@cli.command(name='preprocess')
@command
def preprocess_cmd(pipeline):
    """Write the standardized factor panel."""
    return pipeline.preprocess()


@cli.command()
@click.option('--k', type=click.IntRange(min=1), default=None, help='Number of factors to select.')
@command
def ic(pipeline, k):
    """Rank factors by information coefficient."""
    return pipeline.ic(k)


@cli.command(name='train-picker')
@click.option('--search', is_flag=True, help='Run the hyperparameter sweep first.')
@command
def train_picker(pipeline, search):
    """Train the stock-picking network on the latest window."""
    return pipeline.train_picker(search)


@cli.command(name='train-regime')
@command
def train_regime(pipeline):
    """Fit the regime model on the latest window and export the state path."""
    return pipeline.train_regime()


@cli.command()
@command
def backtest(pipeline):
    """Run the daily fusion backtest."""
    return pipeline.backtest()


@cli.command()
@click.argument('metrics', nargs=-1, required=True, type=click.Path(dir_okay=False))
@command
def report(pipeline, metrics):
    """Compare metrics files per year and strategy."""
    return pipeline.report(list(metrics))


def main():
    cli(prog_name='fusion', obj={})


if __name__ == '__main__':
    sys.exit(main())
