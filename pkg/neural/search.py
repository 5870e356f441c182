# neural/search.py - One-at-a-time hyperparameter sweep scored by RMSE/MAE on a held-out window

from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

import config
from neural.network import NetworkShape, forward
from neural.swarm import pso_train
from utils.errors import InsufficientDataError, ValidationError

SEARCH_ORDER = ('n', 'k', 'a', 'k_select')


def holdout_errors(predictions, targets):
    """(RMSE, MAE) over every prediction/target pair."""
    predictions = np.asarray(predictions, dtype=float).ravel()
    targets = np.asarray(targets, dtype=float).ravel()
    if predictions.shape != targets.shape:
        raise ValidationError(f"{predictions.size} predictions vs {targets.size} targets")
    if predictions.size == 0:
        raise InsufficientDataError("no predictions to score")
    errors = predictions - targets
    return float(np.sqrt(np.mean(errors ** 2))), float(np.mean(np.abs(errors)))


def default_hyperparameters():
    return {
        'n': config.NETWORK_SHAPE['n'],
        'k': config.NETWORK_SHAPE['k'],
        'a': config.NETWORK_SHAPE['a'],
        'k_select': config.FACTOR_OPTIONS['k_select'],
    }


@dataclass(frozen=True, eq=False)
class SearchResult:
    best: dict
    table: pd.DataFrame

    @property
    def shape(self):
        return NetworkShape(k=int(self.best['k']), n=int(self.best['n']), a=float(self.best['a']))

    @property
    def k_select(self):
        return int(self.best['k_select'])


def hyperparameter_search(train_dates, test_dates, grids, prepare, swarm_config, seed, defaults=None):
    """
    Sweep each hyperparameter in turn with the others held at their defaults.

    Args:
        train_dates, test_dates: Disjoint date collections
        grids: Mapping of 'n', 'k', 'a', 'k_select' to candidate values
        prepare: Callable (k_select, k) -> (train TrainingSet, test TrainingSet)
        swarm_config: SwarmConfig used for every candidate
        seed: Swarm seed shared by every candidate
        defaults: Incumbent values (module defaults when omitted)

    Returns:
        SearchResult whose best value for each hyperparameter is the argmin
        test RMSE of its own sweep (first grid value on ties)
    """
    if not grids or any(len(values) == 0 for values in grids.values()):
        raise ValidationError("hyperparameter grids must be non-empty")
    unknown = set(grids) - set(SEARCH_ORDER)
    if unknown:
        raise ValidationError(f"unknown hyperparameters: {sorted(unknown)}")
    if set(pd.DatetimeIndex(train_dates)) & set(pd.DatetimeIndex(test_dates)):
        raise ValidationError("train and test date ranges overlap")

    incumbent = dict(defaults or default_hyperparameters())
    cache = {}
    prepared = {}

    def score(candidate):
        key = tuple(candidate[name] for name in SEARCH_ORDER)
        if key not in cache:
            k_select, k = int(candidate['k_select']), int(candidate['k'])
            if k > k_select:
                cache[key] = (np.nan, np.nan)
                return cache[key]
            if (k_select, k) not in prepared:
                prepared[(k_select, k)] = prepare(k_select, k)
            train, test = prepared[(k_select, k)]
            shape = NetworkShape(k=k, n=int(candidate['n']), a=float(candidate['a']))
            net, _ = pso_train(train, shape, swarm_config, seed)
            cache[key] = holdout_errors(forward(net, shape, test.inputs), test.targets)
        return cache[key]

    rows = []
    best = dict(incumbent)
    for name in SEARCH_ORDER:
        if name not in grids:
            continue
        best_rmse = np.inf
        for value in grids[name]:
            candidate = dict(incumbent, **{name: value})
            rmse, mae = score(candidate)
            rows.append({'param': name, 'value': value, **candidate, 'rmse': rmse, 'mae': mae})
            if np.isfinite(rmse) and rmse < best_rmse:
                best_rmse = rmse
                best[name] = value
        logger.info(f"Search {name}: best {best[name]} (test RMSE {best_rmse:.6g})")

    if best['k'] > best['k_select']:
        logger.warning(f"Best k={best['k']} exceeds best k_select={best['k_select']}; clamping k")
        best['k'] = best['k_select']
    return SearchResult(best=best, table=pd.DataFrame(rows))
